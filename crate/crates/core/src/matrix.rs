//! Dense matrices over exact rationals.
//!
//! Determinants clear denominators row by row and then run fraction-free
//! Bareiss elimination over the integers, so every intermediate value is an
//! exact integer and signs are never in doubt.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` disambiguates the zero-row case.
    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Matrix> {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Matrix::new(r, cols, entries)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        Matrix::from_rows(rows, cols).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Scalar]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Scalar::zero();
                for t in 0..self.cols {
                    let a = self.get(r, t);
                    if !a.is_zero() {
                        acc += a * other.get(t, c);
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Rows at the given 0-based positions, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Matrix::from_rows(rows, self.cols).expect("row selection keeps width")
    }

    /// Columns at the given 0-based positions, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let rows = self
            .row_iter()
            .map(|row| idx.iter().map(|&c| row[c].clone()).collect())
            .collect();
        Matrix::from_rows(rows, idx.len()).expect("column selection keeps height")
    }

    /// Vertical concatenation.
    pub fn stack(&self, below: &Matrix) -> Result<Matrix> {
        if self.cols != below.cols {
            return Err(Error::Dimension(format!(
                "cannot stack widths {} and {}",
                self.cols, below.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        Matrix::new(self.rows + below.rows, self.cols, entries)
    }

    /// Appends one column, used by the zero-column padding.
    pub fn append_col(&self, col: &[Scalar]) -> Result<Matrix> {
        if col.len() != self.rows {
            return Err(Error::Dimension("appended column has wrong height".into()));
        }
        let rows = self
            .row_iter()
            .zip(col)
            .map(|(row, v)| {
                let mut r = row.to_vec();
                r.push(v.clone());
                r
            })
            .collect();
        Matrix::from_rows(rows, self.cols + 1)
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(det_rows(self.row_iter()))
    }

    pub fn rank(&self) -> usize {
        echelon(&mut self.to_rows()).len()
    }
}

/// Determinant of the square matrix whose rows are yielded by `rows`.
///
/// Panics if the rows are ragged or their count differs from their width.
pub fn det_rows<'a, I>(rows: I) -> Scalar
where
    I: IntoIterator<Item = &'a [Scalar]>,
{
    let mut scale = BigInt::one();
    let mut grid: Vec<Vec<BigInt>> = Vec::new();
    for row in rows {
        let l = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        grid.push(
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect(),
        );
        scale *= l;
    }
    let n = grid.len();
    assert!(grid.iter().all(|r| r.len() == n), "det_rows needs a square matrix");
    Scalar::new(bareiss(grid), scale)
}

/// Fraction-free Bareiss elimination; every division is exact.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Scalar>),
    /// Consistent but underdetermined.
    Many,
    Inconsistent,
}

/// Solves `a · x = b` exactly.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Solution> {
    if b.len() != a.rows() {
        return Err(Error::Dimension("right-hand side has wrong length".into()));
    }
    let n = a.cols();
    let aug: Vec<Vec<Scalar>> = a
        .row_iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.to_vec();
            r.push(v.clone());
            r
        })
        .collect();
    let mut work = aug;
    let pivots = echelon(&mut work);
    if pivots.last() == Some(&n) {
        return Ok(Solution::Inconsistent);
    }
    if pivots.len() < n {
        return Ok(Solution::Many);
    }
    Ok(Solution::Unique(
        (0..n).map(|i| work[i][n].clone()).collect(),
    ))
}

/// Gauss-Jordan reduction in place; returns the pivot columns.
fn echelon(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use proptest::prelude::*;

    // Laplace expansion along the first row, independent of Bareiss.
    fn cofactor_det(m: &[Vec<Scalar>]) -> Scalar {
        let n = m.len();
        if n == 0 {
            return Scalar::one();
        }
        let mut acc = Scalar::zero();
        for c in 0..n {
            let minor: Vec<Vec<Scalar>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][c] * cofactor_det(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn small_determinants() {
        assert_eq!(Matrix::from_i64(&[&[1, 1], &[1, 2]]).determinant().unwrap(), int(1));
        assert_eq!(Matrix::identity(4).determinant().unwrap(), int(1));
        let v = Matrix::from_i64(&[&[1, 1, 1], &[1, 2, 4], &[1, 3, 9]]);
        let expected = cofactor_det(&v.to_rows());
        assert_eq!(expected, int(2));
        assert_eq!(v.determinant().unwrap(), expected);
        assert_eq!(Matrix::zeros(0, 0).determinant().unwrap(), int(1));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = Matrix::from_i64(&[&[1, 2, 3]]);
        assert!(matches!(m.determinant(), Err(Error::Dimension(_))));
    }

    #[test]
    fn rational_entries() {
        let m = Matrix::from_rows(
            vec![vec![frac(1, 2), frac(1, 3)], vec![frac(1, 4), frac(1, 5)]],
            2,
        )
        .unwrap();
        assert_eq!(m.determinant().unwrap(), frac(1, 10) - frac(1, 12));
    }

    #[test]
    fn rank_and_solve() {
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
        let sol = solve(&m, &[int(3), int(6), int(1)]).unwrap();
        assert_eq!(sol, Solution::Unique(vec![int(1), int(1)]));
        assert_eq!(
            solve(&m, &[int(3), int(7), int(1)]).unwrap(),
            Solution::Inconsistent
        );
        let under = Matrix::from_i64(&[&[1, 1]]);
        assert_eq!(solve(&under, &[int(1)]).unwrap(), Solution::Many);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
        prop::collection::vec(prop::collection::vec((-6i64..7, 1i64..4), n), n)
    }

    fn build(raw: &[Vec<(i64, i64)>]) -> Matrix {
        let n = raw.len();
        let rows = raw
            .iter()
            .map(|r| r.iter().map(|&(p, q)| frac(p, q)).collect())
            .collect();
        Matrix::from_rows(rows, n).unwrap()
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor(raw in (1usize..6).prop_flat_map(small_matrix)) {
            let m = build(&raw);
            prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&m.to_rows()));
        }

        #[test]
        fn row_swap_negates(raw in (2usize..6).prop_flat_map(small_matrix), a in 0usize..6, b in 0usize..6) {
            let m = build(&raw);
            let n = m.rows();
            let (a, b) = (a % n, b % n);
            prop_assume!(a != b);
            let mut order: Vec<usize> = (0..n).collect();
            order.swap(a, b);
            let swapped = m.select_rows(&order);
            prop_assert_eq!(swapped.determinant().unwrap(), -m.determinant().unwrap());
        }

        #[test]
        fn determinant_is_multiplicative(
            (x, y) in (1usize..5).prop_flat_map(|n| (small_matrix(n), small_matrix(n)))
        ) {
            let a = build(&x);
            let b = build(&y);
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(
                ab.determinant().unwrap(),
                a.determinant().unwrap() * b.determinant().unwrap()
            );
        }
    }
}
