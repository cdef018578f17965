//! Index lists and the window enumerators.
//!
//! Indices are 1-based throughout, matching the labels of the rows of 𝒵.
//! A "pair window" is a strictly ascending list `(i1, i1+1, i2, i2+1, ...)`;
//! strict ascent forces `i_{j+1} >= i_j + 2`, so the pairs are disjoint.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};
use crate::matrix::det_rows;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// An ordered list of 1-based row indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexList(pub Vec<usize>);

impl IndexList {
    pub fn new(v: Vec<usize>) -> IndexList {
        IndexList(v)
    }

    pub fn empty() -> IndexList {
        IndexList(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn is_strictly_ascending(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.iter().find(|&&i| i == 0 || i > n) {
            Some(i) => Err(contract(format!("index {i} outside [1, {n}] in {self}"))),
            None => Ok(()),
        }
    }

    /// `self` followed by `tail`.
    pub fn with(&self, tail: &[usize]) -> IndexList {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        IndexList(v)
    }

    /// Copy with the element at `pos` removed.
    pub fn without_position(&self, pos: usize) -> IndexList {
        let mut v = self.0.clone();
        v.remove(pos);
        IndexList(v)
    }

    pub fn sorted(&self) -> IndexList {
        let mut v = self.0.clone();
        v.sort_unstable();
        IndexList(v)
    }
}

impl From<Vec<usize>> for IndexList {
    fn from(v: Vec<usize>) -> Self {
        IndexList(v)
    }
}

impl From<&[usize]> for IndexList {
    fn from(v: &[usize]) -> Self {
        IndexList(v.to_vec())
    }
}

impl fmt::Display for IndexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Sign of the permutation sorting `list`, or `None` if it repeats a value.
pub fn permutation_sign(list: &[usize]) -> Option<i8> {
    let mut inversions = 0usize;
    for a in 0..list.len() {
        for b in a + 1..list.len() {
            match list[a].cmp(&list[b]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// All `k`-subsets of `[lo, hi]` in lexicographic order.
pub fn subsets_in(lo: usize, hi: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
        return out;
    }
    if hi < lo || hi - lo + 1 < k {
        return out;
    }
    let mut cur: Vec<usize> = (lo..lo + k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost position that still has room
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if cur[pos] < hi - (k - 1 - pos) {
                cur[pos] += 1;
                for j in pos + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return out;
            }
        }
    }
}

/// All `k`-subsets of `[1, n]` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    subsets_in(1, n, k)
}

/// Lists `(p1, p1+1, ..., pq, pq+1)` with `lo <= p1`, `pq + 1 <= hi` and
/// `p_{j+1} >= p_j + 2`, in lexicographic order of the starts.
pub fn pair_windows(lo: usize, hi: usize, pairs: usize) -> Vec<IndexList> {
    let mut out = Vec::new();
    let mut starts = Vec::with_capacity(pairs);
    fn rec(lo: usize, hi: usize, left: usize, starts: &mut Vec<usize>, out: &mut Vec<IndexList>) {
        if left == 0 {
            out.push(IndexList(starts.iter().flat_map(|&p| [p, p + 1]).collect()));
            return;
        }
        // the remaining `left` pairs need 2*left slots
        let mut p = lo;
        while p + 2 * left - 1 <= hi {
            starts.push(p);
            rec(p + 2, hi, left - 1, starts, out);
            starts.pop();
            p += 1;
        }
    }
    rec(lo, hi, pairs, &mut starts, &mut out);
    out
}

/// Splits a sorted pair window back into the starts of its pairs.
pub fn pair_starts(list: &[usize]) -> Option<Vec<usize>> {
    if list.len() % 2 != 0 {
        return None;
    }
    let mut starts = Vec::with_capacity(list.len() / 2);
    for chunk in list.chunks(2) {
        if chunk[1] != chunk[0] + 1 {
            return None;
        }
        if let Some(&prev) = starts.last() {
            if chunk[0] < prev + 2 {
                return None;
            }
        }
        starts.push(chunk[0]);
    }
    Some(starts)
}

/// Windows of the polytope P(Y, 𝒵) for even `m`.
///
/// Type (a): `m/2` pairs inside `[1, n]`. Type (b): `m/2 - 1` pairs inside
/// `[2, n-1]` followed by `(n, 1)`. Type (a) lists come first.
pub fn window_lists_even(n: usize, m: usize) -> Result<Vec<IndexList>> {
    if m == 0 || m % 2 != 0 {
        return Err(contract(format!("window_lists_even needs even m >= 2, got {m}")));
    }
    if n < m {
        return Err(contract(format!("need n >= m, got n={n}, m={m}")));
    }
    let mut out = pair_windows(1, n, m / 2);
    out.extend(
        pair_windows(2, n - 1, m / 2 - 1)
            .into_iter()
            .map(|j| j.with(&[n, 1])),
    );
    Ok(out)
}

/// Simplices `(i1, i1+1, ..., ir, ir+1)` used by the crossing number, `m = 2r - 1`.
pub fn window_lists_odd(n: usize, m: usize) -> Result<Vec<IndexList>> {
    if m % 2 != 1 {
        return Err(contract(format!("window_lists_odd needs odd m, got {m}")));
    }
    if n < m + 1 {
        return Err(contract(format!("need n >= m + 1, got n={n}, m={m}")));
    }
    Ok(pair_windows(1, n, (m + 1) / 2))
}

/// Maximal minor of `m` on the strictly ascending 1-based columns `cols`.
pub fn plucker(m: &Matrix, cols: &[usize]) -> Result<Scalar> {
    if cols.len() != m.rows() {
        return Err(contract(format!(
            "plucker needs {} columns, got {}",
            m.rows(),
            cols.len()
        )));
    }
    if !cols.windows(2).all(|w| w[0] < w[1]) {
        return Err(contract(format!("plucker columns not ascending: {cols:?}")));
    }
    IndexList::from(cols).check_range(m.cols())?;
    Ok(minor_unchecked(m, cols))
}

/// Antisymmetric extension of [`plucker`]: zero on repeats, otherwise the
/// sign of the sorting permutation times the sorted minor.
pub fn plucker_signed(m: &Matrix, cols: &[usize]) -> Result<Scalar> {
    if cols.len() != m.rows() {
        return Err(contract(format!(
            "plucker needs {} columns, got {}",
            m.rows(),
            cols.len()
        )));
    }
    IndexList::from(cols).check_range(m.cols())?;
    match permutation_sign(cols) {
        None => Ok(Scalar::from_integer(0.into())),
        // the determinant already carries the column order's sign
        Some(_) => Ok(minor_unchecked(m, cols)),
    }
}

/// Determinant of the columns `cols` (1-based, any order) of `m`.
pub(crate) fn minor_unchecked(m: &Matrix, cols: &[usize]) -> Scalar {
    let rows: Vec<Vec<Scalar>> = m
        .row_iter()
        .map(|r| cols.iter().map(|&c| r[c - 1].clone()).collect())
        .collect();
    det_rows(rows.iter().map(Vec::as_slice))
}
