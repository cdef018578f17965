//! JSON wire format. Every number is an exact `"p/q"` string.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::positivity::{GrassmannC, PositiveZ, PositivityClass, YPoint};
use crate::scalar::{format_scalar, parse_scalar};
use crate::twistor::TwistorContext;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> MatrixJson {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.row_iter().map(|r| r.iter().map(format_scalar).collect()).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Parse(format!(
                "matrix declares {}x{} but entries have another shape",
                self.rows, self.cols
            )));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows, self.cols).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `{"n", "k", "m", "Z", "C"?, "Y"?}` with exactly one of `C` and `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextJson {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    #[serde(rename = "Z")]
    pub z: MatrixJson,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<MatrixJson>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<MatrixJson>,
}

impl ContextJson {
    /// Keeps `C` when the context has one, otherwise writes `Y`.
    pub fn from_context(ctx: &TwistorContext) -> ContextJson {
        let (c, y) = match &ctx.c {
            Some(c) => (Some(MatrixJson::from(&c.matrix)), None),
            None => (None, Some(MatrixJson::from(&ctx.y.matrix))),
        };
        ContextJson { n: ctx.n(), k: ctx.k(), m: ctx.m(), z: MatrixJson::from(&ctx.z.matrix), c, y }
    }

    /// Shape problems are parse errors; a 𝒵 with a nonpositive maximal
    /// minor or a C outside Gr^{≥0} is a positivity error.
    pub fn to_context(&self) -> Result<TwistorContext> {
        let (n, k, m) = (self.n, self.k, self.m);
        if m == 0 || n < k + m {
            return Err(Error::Parse(format!("need m >= 1 and n >= k+m, got n={n}, k={k}, m={m}")));
        }
        let shape = |what: &str, mj: &MatrixJson, rows: usize, cols: usize| {
            if mj.rows != rows || mj.cols != cols {
                return Err(Error::Parse(format!(
                    "{what} is {}x{}, expected {rows}x{cols}",
                    mj.rows, mj.cols
                )));
            }
            mj.to_matrix()
        };
        let z = PositiveZ::certify(shape("Z", &self.z, n, k + m)?, k, m)?;
        match (&self.c, &self.y) {
            (Some(c), None) => {
                let c = shape("C", c, k, n)?;
                let c = GrassmannC::certify(c, PositivityClass::Nonnegative)?;
                TwistorContext::from_c(c, z)
            }
            (None, Some(y)) => {
                let y = YPoint::new(shape("Y", y, k, k + m)?, m)?;
                TwistorContext::new(z, y)
            }
            _ => Err(Error::Parse("exactly one of C and Y must be given".into())),
        }
    }
}

pub fn parse_context(json: &str) -> Result<TwistorContext> {
    let raw: ContextJson = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_context()
}

pub fn context_to_json(ctx: &TwistorContext) -> String {
    serde_json::to_string_pretty(&ContextJson::from_context(ctx)).expect("plain data serializes")
}
