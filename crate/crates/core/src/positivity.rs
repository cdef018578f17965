//! Positive inputs: the matrix 𝒵, points of the (nonnegative) Grassmannian,
//! and the zero-column padding.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{minor_unchecked, subsets, IndexList};
use crate::error::{contract, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{frac, int, Scalar};

pub type SampleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest `n` the certifying constructors accept unless told otherwise.
pub const DEFAULT_MAX_N: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveZ {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub matrix: Matrix,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityClass {
    StrictlyPositive,
    Nonnegative,
    Unconstrained,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannC {
    pub k: usize,
    pub n: usize,
    pub matrix: Matrix,
    pub class: PositivityClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YPoint {
    pub k: usize,
    pub m: usize,
    pub matrix: Matrix,
}

/// Every maximal minor of `z` on ascending row sets, in lexicographic order.
fn maximal_row_minors(z: &Matrix) -> Vec<(Vec<usize>, Scalar)> {
    let zt = z.transpose();
    subsets(z.rows(), z.cols())
        .into_par_iter()
        .map(|rows| {
            let v = minor_unchecked(&zt, &rows);
            (rows, v)
        })
        .collect()
}

/// Every maximal minor of `c` on ascending column sets, in lexicographic order.
pub fn maximal_col_minors(c: &Matrix) -> Vec<(Vec<usize>, Scalar)> {
    subsets(c.cols(), c.rows())
        .into_par_iter()
        .map(|cols| {
            let v = minor_unchecked(c, &cols);
            (cols, v)
        })
        .collect()
}

fn classify(minors: &[(Vec<usize>, Scalar)]) -> PositivityClass {
    if minors.iter().all(|(_, v)| v.is_positive()) {
        PositivityClass::StrictlyPositive
    } else if minors.iter().all(|(_, v)| !v.is_negative()) {
        PositivityClass::Nonnegative
    } else {
        PositivityClass::Unconstrained
    }
}

impl PositiveZ {
    /// Certifies an arbitrary `n × (k+m)` matrix.
    pub fn certify(matrix: Matrix, k: usize, m: usize) -> Result<PositiveZ> {
        let n = matrix.rows();
        if matrix.cols() != k + m {
            return Err(Error::Dimension(format!(
                "Z has {} columns, expected k+m={}",
                matrix.cols(),
                k + m
            )));
        }
        if n < k + m {
            return Err(contract(format!("need n >= k+m, got n={n}, k+m={}", k + m)));
        }
        if let Some((rows, v)) = maximal_row_minors(&matrix)
            .into_iter()
            .find(|(_, v)| !v.is_positive())
        {
            return Err(Error::Positivity(format!(
                "minor of Z on rows {} is {v}",
                IndexList(rows)
            )));
        }
        Ok(PositiveZ { n, k, m, matrix, certified: true })
    }

    /// Row `i` (1-based).
    pub fn row(&self, i: usize) -> &[Scalar] {
        self.matrix.row(i - 1)
    }
}

impl GrassmannC {
    /// Wraps `matrix` and records the strongest class its minors satisfy.
    pub fn classify(matrix: Matrix) -> Result<GrassmannC> {
        let (k, n) = (matrix.rows(), matrix.cols());
        if k > n {
            return Err(Error::Dimension(format!("C is {k}x{n} with k > n")));
        }
        if matrix.rank() != k {
            return Err(Error::Degenerate(format!("C has rank {} < k={k}", matrix.rank())));
        }
        let class = classify(&maximal_col_minors(&matrix));
        Ok(GrassmannC { k, n, matrix, class })
    }

    /// Like [`GrassmannC::classify`] but fails unless the class is at least `want`.
    pub fn certify(matrix: Matrix, want: PositivityClass) -> Result<GrassmannC> {
        let c = GrassmannC::classify(matrix)?;
        let ok = match want {
            PositivityClass::StrictlyPositive => c.class == PositivityClass::StrictlyPositive,
            PositivityClass::Nonnegative => c.class != PositivityClass::Unconstrained,
            PositivityClass::Unconstrained => true,
        };
        if !ok {
            return Err(Error::Positivity(format!(
                "C is {:?}, expected {want:?}",
                c.class
            )));
        }
        Ok(c)
    }
}

impl YPoint {
    pub fn new(matrix: Matrix, m: usize) -> Result<YPoint> {
        let k = matrix.rows();
        if matrix.cols() != k + m {
            return Err(Error::Dimension(format!(
                "Y has {} columns, expected k+m={}",
                matrix.cols(),
                k + m
            )));
        }
        if matrix.rank() != k {
            return Err(Error::Degenerate(format!("Y has rank {} < k={k}", matrix.rank())));
        }
        Ok(YPoint { k, m, matrix })
    }
}

fn check_increasing_positive(nodes: &[Scalar]) -> Result<()> {
    if nodes.first().is_some_and(|x| !x.is_positive()) {
        return Err(contract("nodes must be positive"));
    }
    if !nodes.windows(2).all(|w| w[0] < w[1]) {
        return Err(contract("nodes must be strictly increasing"));
    }
    Ok(())
}

fn powers(x: &Scalar, count: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(count);
    let mut p = Scalar::one();
    for _ in 0..count {
        out.push(p.clone());
        p *= x;
    }
    out
}

/// 𝒵 with row `i` equal to `(1, x_i, ..., x_i^{k+m-1})`, certified exhaustively.
pub fn sample_vandermonde_z(n: usize, k: usize, m: usize, nodes: &[Scalar]) -> Result<PositiveZ> {
    if nodes.len() != n {
        return Err(contract(format!("{} nodes for n={n}", nodes.len())));
    }
    if n < k + m {
        return Err(contract(format!("need n >= k+m, got n={n}, k+m={}", k + m)));
    }
    check_increasing_positive(nodes)?;
    let rows = nodes.iter().map(|x| powers(x, k + m)).collect();
    let matrix = Matrix::from_rows(rows, k + m)?;
    PositiveZ::certify(matrix, k, m)
        .map_err(|e| Error::Internal(format!("Vandermonde certification failed: {e}")))
}

/// C with entry `(a, j) = t_a^{j-1}`, certified strictly positive.
pub fn sample_positive_c(k: usize, n: usize, nodes: &[Scalar]) -> Result<GrassmannC> {
    if nodes.len() != k {
        return Err(contract(format!("{} nodes for k={k}", nodes.len())));
    }
    if k > n {
        return Err(contract(format!("need k <= n, got k={k}, n={n}")));
    }
    check_increasing_positive(nodes)?;
    let rows = nodes.iter().map(|t| powers(t, n)).collect();
    let matrix = Matrix::from_rows(rows, n)?;
    GrassmannC::certify(matrix, PositivityClass::StrictlyPositive)
        .map_err(|e| Error::Internal(format!("positive C certification failed: {e}")))
}

/// Number of weights consumed by [`sample_tnn_boundary_c`].
pub fn tnn_weight_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `[I_k | 0] · E_{n-1} (E_{n-2} E_{n-1}) (E_{n-3} E_{n-2} E_{n-1}) ...`, where
/// `E_i(w)` adds `w` times column `i` to column `i+1`.
///
/// The word is reduced for the longest permutation, so positive weights give
/// a strictly positive point and zero weights land on the boundary.
pub fn sample_tnn_boundary_c(k: usize, n: usize, weights: &[Scalar]) -> Result<GrassmannC> {
    if k > n {
        return Err(contract(format!("need k <= n, got k={k}, n={n}")));
    }
    if weights.len() != tnn_weight_count(n) {
        return Err(contract(format!(
            "{} weights, expected {}",
            weights.len(),
            tnn_weight_count(n)
        )));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(contract("planar-network weights must be nonnegative"));
    }
    let mut rows: Vec<Vec<Scalar>> = (0..k)
        .map(|a| (0..n).map(|j| if a == j { int(1) } else { int(0) }).collect())
        .collect();
    let mut w = weights.iter();
    for start in (1..n).rev() {
        for i in start..n {
            let weight = w.next().expect("weight count checked");
            if weight.is_zero() {
                continue;
            }
            // 1-based column i feeds column i+1
            for row in rows.iter_mut() {
                let add = &row[i - 1] * weight;
                row[i] += add;
            }
        }
    }
    let matrix = Matrix::from_rows(rows, n)?;
    GrassmannC::certify(matrix, PositivityClass::Nonnegative)
        .map_err(|e| Error::Internal(format!("planar-network certification failed: {e}")))
}

/// Appends a zero column, turning a point of Gr_{k,n} into one of Gr_{k,n+1}.
pub fn pad_with_zero_column(c: &GrassmannC) -> GrassmannC {
    let matrix = c
        .matrix
        .append_col(&vec![Scalar::zero(); c.k])
        .expect("column height matches");
    let class = match c.class {
        PositivityClass::Unconstrained => PositivityClass::Unconstrained,
        _ if c.k == 0 => c.class,
        _ => PositivityClass::Nonnegative,
    };
    GrassmannC { k: c.k, n: c.n + 1, matrix, class }
}

/// The point `C𝒵` of Gr_{k,k+m}.
pub fn apply_map(c: &GrassmannC, z: &PositiveZ) -> Result<YPoint> {
    if c.n != z.n || c.k != z.k {
        return Err(Error::Dimension(format!(
            "C is {}x{} but Z expects k={}, n={}",
            c.k, c.n, z.k, z.n
        )));
    }
    YPoint::new(c.matrix.mul(&z.matrix)?, z.m)
}

/// `count` strictly increasing positive nodes: consecutive integers from 1
/// with a jitter `a/q`, `0 <= a < q <= 4`, in each slot.
pub fn random_nodes(rng: &mut SampleRng, count: usize) -> Vec<Scalar> {
    (0..count)
        .map(|i| {
            let q: i64 = rng.gen_range(1..=4);
            let a: i64 = rng.gen_range(0..q);
            int(i as i64 + 1) + frac(a, q)
        })
        .collect()
}

/// Planar-network weights in `{1, 2, 3}` with each one zeroed with
/// probability `zero_prob`.
pub fn random_tnn_weights(rng: &mut SampleRng, n: usize, zero_prob: f64) -> Vec<Scalar> {
    (0..tnn_weight_count(n))
        .map(|_| {
            if rng.gen_bool(zero_prob) {
                int(0)
            } else {
                int(rng.gen_range(1..=3))
            }
        })
        .collect()
}

/// A random rank-`k` matrix with small integer entries.
pub fn random_full_rank(rng: &mut SampleRng, rows: usize, cols: usize, bound: i64) -> Matrix {
    loop {
        let entries = (0..rows * cols)
            .map(|_| int(rng.gen_range(-bound..=bound)))
            .collect();
        let m = Matrix::new(rows, cols, entries).expect("entry count matches");
        if m.rank() == rows.min(cols) {
            return m;
        }
    }
}
