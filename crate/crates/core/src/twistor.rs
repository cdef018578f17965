//! Twistor coordinates and the identities and sign patterns they satisfy.
//!
//! ⟨Y, i_1, ..., i_m⟩ is the determinant of the k rows of the stored Y
//! representative followed by the rows 𝒵_{i_1}, ..., 𝒵_{i_m}. Every value is
//! relative to that representative: another one scales all of them by the
//! same nonzero factor.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    minor_unchecked, pair_starts, pair_windows, permutation_sign, subsets, window_lists_even,
    IndexList,
};
use crate::error::{contract, Error, Result};
use crate::matrix::{det_rows, Matrix};
use crate::positivity::{apply_map, GrassmannC, PositiveZ, YPoint};
use crate::scalar::{serde_scalar, Scalar, Sign};

#[derive(Clone, Debug)]
pub struct TwistorContext {
    pub z: PositiveZ,
    pub y: YPoint,
    pub c: Option<GrassmannC>,
}

impl TwistorContext {
    pub fn new(z: PositiveZ, y: YPoint) -> Result<TwistorContext> {
        if y.k != z.k || y.m != z.m {
            return Err(Error::Dimension(format!(
                "Y is in Gr({}, {}) but Z has k={}, m={}",
                y.k,
                y.k + y.m,
                z.k,
                z.m
            )));
        }
        Ok(TwistorContext { z, y, c: None })
    }

    /// Context with `Y = C𝒵`.
    pub fn from_c(c: GrassmannC, z: PositiveZ) -> Result<TwistorContext> {
        let y = apply_map(&c, &z)?;
        Ok(TwistorContext { z, y, c: Some(c) })
    }

    /// Same 𝒵 (and C) with a different representative of the same or another Y.
    pub fn with_y(&self, y: Matrix) -> Result<TwistorContext> {
        let y = YPoint::new(y, self.m())?;
        let mut ctx = TwistorContext::new(self.z.clone(), y)?;
        ctx.c = self.c.clone();
        Ok(ctx)
    }

    pub fn n(&self) -> usize {
        self.z.n
    }

    pub fn k(&self) -> usize {
        self.z.k
    }

    pub fn m(&self) -> usize {
        self.z.m
    }

    /// ⟨Y, list⟩; repeated indices give 0.
    pub fn twistor(&self, list: &[usize]) -> Result<Scalar> {
        if list.len() != self.m() {
            return Err(contract(format!(
                "twistor needs {} indices, got {}",
                self.m(),
                list.len()
            )));
        }
        IndexList::from(list).check_range(self.n())?;
        Ok(self.twistor_unchecked(list))
    }

    pub(crate) fn twistor_unchecked(&self, list: &[usize]) -> Scalar {
        if permutation_sign(list).is_none() {
            return Scalar::zero();
        }
        let rows = self
            .y
            .matrix
            .row_iter()
            .chain(list.iter().map(|&i| self.z.row(i)));
        det_rows(rows)
    }

    /// ⟨Y, v_1, ..., v_m⟩ for arbitrary vectors of length k+m.
    pub fn twistor_of_vectors(&self, vs: &[&[Scalar]]) -> Scalar {
        debug_assert_eq!(vs.len(), self.m());
        det_rows(self.y.matrix.row_iter().chain(vs.iter().copied()))
    }

    /// ⟨Y, list⟩ recomputed as Σ_J p_J(C) ⟨J, list⟩ over all k-subsets J.
    pub fn twistor_via_cauchy_binet(&self, list: &[usize]) -> Result<Scalar> {
        let c = self
            .c
            .as_ref()
            .ok_or_else(|| contract("Cauchy-Binet expansion needs C"))?;
        if list.len() != self.m() {
            return Err(contract(format!(
                "twistor needs {} indices, got {}",
                self.m(),
                list.len()
            )));
        }
        IndexList::from(list).check_range(self.n())?;
        let mut acc = Scalar::zero();
        for j in subsets(self.n(), self.k()) {
            let p = minor_unchecked(&c.matrix, &j);
            if p.is_zero() {
                continue;
            }
            let rows = j.iter().chain(list).map(|&i| self.z.row(i));
            acc += p * det_rows(rows);
        }
        Ok(acc)
    }

    /// (⟨Y, B, i⟩)_{i = 1..n}.
    pub fn twistor_row(&self, b: &[usize]) -> Result<Vec<Scalar>> {
        if b.len() + 1 != self.m() {
            return Err(contract(format!(
                "window B must have m-1={} entries, got {}",
                self.m() - 1,
                b.len()
            )));
        }
        IndexList::from(b).check_range(self.n())?;
        let mut list = b.to_vec();
        list.push(0);
        Ok((1..=self.n())
            .map(|i| {
                *list.last_mut().expect("list is nonempty") = i;
                self.twistor_unchecked(&list)
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseEntry {
    pub list: IndexList,
    /// The sign the inequality multiplies the twistor by.
    pub factor: Sign,
    #[serde(with = "serde_scalar")]
    pub value: Scalar,
    /// Sign of `factor * value`.
    pub sign: Sign,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseBoundaryReport {
    pub strict: bool,
    pub entries: Vec<CoarseEntry>,
    pub all_satisfied: bool,
    /// No listed twistor vanishes, so Y is off the coarse-boundary locus.
    pub without_coarse_boundary: bool,
}

impl CoarseBoundaryReport {
    pub fn first_zero(&self) -> Option<&CoarseEntry> {
        self.entries.iter().find(|e| e.sign.is_zero())
    }

    pub fn first_unsatisfied(&self) -> Option<&CoarseEntry> {
        self.entries.iter().find(|e| !e.satisfied)
    }

    /// The strict conditions hold for this representative of Y or for one
    /// of the opposite orientation (every twistor flips sign together).
    pub fn satisfied_up_to_sign(&self) -> bool {
        let first = self.entries.first().map(|e| e.sign);
        first.map_or(true, |s| !s.is_zero() && self.entries.iter().all(|e| e.sign == s))
    }
}

/// The lists and sign factors of the coarse boundary inequalities.
pub fn coarse_boundary_lists(n: usize, k: usize, m: usize) -> Result<Vec<(IndexList, Sign)>> {
    if m == 0 {
        return Err(contract("coarse boundary conditions need m >= 1"));
    }
    if m % 2 == 0 {
        let b_factor = Sign::parity(k + 1);
        return Ok(window_lists_even(n, m)?
            .into_iter()
            .map(|w| {
                let f = if w.as_slice().last() == Some(&1) { b_factor } else { Sign::Positive };
                (w, f)
            })
            .collect());
    }
    if n < m + 1 {
        return Err(contract(format!("need n >= m + 1, got n={n}, m={m}")));
    }
    let r = (m + 1) / 2;
    let mut out: Vec<(IndexList, Sign)> = pair_windows(2, n, r - 1)
        .into_iter()
        .map(|w| (IndexList(vec![1]).with(w.as_slice()), Sign::parity(k)))
        .collect();
    out.extend(
        pair_windows(1, n - 1, r - 1)
            .into_iter()
            .map(|w| (w.with(&[n]), Sign::Positive)),
    );
    Ok(out)
}

pub fn coarse_boundary_report(ctx: &TwistorContext, strict: bool) -> Result<CoarseBoundaryReport> {
    let lists = coarse_boundary_lists(ctx.n(), ctx.k(), ctx.m())?;
    let entries: Vec<CoarseEntry> = lists
        .into_iter()
        .map(|(list, factor)| {
            let value = ctx.twistor_unchecked(list.as_slice());
            let sign = factor * Sign::of(&value);
            let satisfied = match sign {
                Sign::Positive => true,
                Sign::Zero => !strict,
                Sign::Negative => false,
            };
            CoarseEntry { list, factor, value, sign, satisfied }
        })
        .collect();
    let all_satisfied = entries.iter().all(|e| e.satisfied);
    let without_coarse_boundary = entries.iter().all(|e| !e.sign.is_zero());
    Ok(CoarseBoundaryReport { strict, entries, all_satisfied, without_coarse_boundary })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignSequence {
    pub values: Vec<Sign>,
    pub source_window: IndexList,
}

impl SignSequence {
    pub fn from_values(values: &[Scalar], source_window: IndexList) -> SignSequence {
        SignSequence {
            values: values.iter().map(Sign::of).collect(),
            source_window,
        }
    }
}

/// Sign changes between consecutive nonzero entries.
pub fn sign_flip_count(seq: &SignSequence) -> usize {
    count_flips(&seq.values)
}

pub fn count_flips(values: &[Sign]) -> usize {
    let mut last = Sign::Zero;
    let mut flips = 0;
    for &s in values.iter().filter(|s| !s.is_zero()) {
        if !last.is_zero() && s != last {
            flips += 1;
        }
        last = s;
    }
    flips
}

/// Checks that `b` is a sorted union of `(m-1)/2` disjoint adjacent pairs in `[1, n]`.
pub fn check_pair_window(b: &[usize], n: usize, m: usize) -> Result<()> {
    if m % 2 != 1 {
        return Err(contract(format!("pair windows B are for odd m, got m={m}")));
    }
    if b.len() + 1 != m || pair_starts(b).is_none() {
        return Err(contract(format!(
            "B={} is not a list of {} adjacent pairs",
            IndexList::from(b),
            (m - 1) / 2
        )));
    }
    IndexList::from(b).check_range(n)
}

/// (sign⟨Y, B, i⟩)_{i = 1..n} for odd m.
pub fn window_twistor_sequence(ctx: &TwistorContext, b: &[usize]) -> Result<SignSequence> {
    check_pair_window(b, ctx.n(), ctx.m())?;
    let row = ctx.twistor_row(b)?;
    Ok(SignSequence::from_values(&row, IndexList::from(b)))
}

/// All windows B for odd m, in enumeration order.
pub fn b_windows(n: usize, m: usize) -> Result<Vec<IndexList>> {
    if m % 2 != 1 {
        return Err(contract(format!("pair windows B are for odd m, got m={m}")));
    }
    Ok(pair_windows(1, n, (m - 1) / 2))
}

/// Boundary-anchored windows for even m: `(1, pairs in [2, n])` and
/// `(pairs in [1, n-1], n)`.
pub fn anchored_b_windows(n: usize, m: usize) -> Result<Vec<IndexList>> {
    if m == 0 || m % 2 != 0 {
        return Err(contract(format!("anchored windows are for even m, got m={m}")));
    }
    let q = m / 2 - 1;
    let mut out: Vec<IndexList> = pair_windows(2, n, q)
        .into_iter()
        .map(|w| IndexList(vec![1]).with(w.as_slice()))
        .collect();
    out.extend(pair_windows(1, n - 1, q).into_iter().map(|w| w.with(&[n])));
    Ok(out)
}

/// Experimental: the sign sequence for an anchored window with even m.
pub fn anchored_twistor_sequence(ctx: &TwistorContext, b: &[usize]) -> Result<SignSequence> {
    let n = ctx.n();
    if !anchored_b_windows(n, ctx.m())?.iter().any(|w| w.as_slice() == b) {
        return Err(contract(format!("{} is not an anchored window", IndexList::from(b))));
    }
    let row = ctx.twistor_row(b)?;
    Ok(SignSequence::from_values(&row, IndexList::from(b)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VanishingPattern {
    /// A zero whose nearest neighbours outside B have the same nonzero sign.
    ZeroBetweenEqualSigns,
    /// Two zeros adjacent in the list restricted to `[n] \ B`.
    ConsecutiveZeros,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum VanishingCheck {
    Ok,
    Violation { kind: VanishingPattern, position: usize },
}

/// Looks for the two vanishing patterns that cannot occur on the amplituhedron.
/// `position` is the 1-based index of the offending zero (the first of the
/// two for consecutive zeros).
pub fn forbidden_vanishing_check(seq: &SignSequence) -> VanishingCheck {
    let n = seq.values.len();
    let b = &seq.source_window;
    let outside: Vec<usize> = (1..=n).filter(|i| !b.contains(*i)).collect();
    let sign = |i: usize| seq.values[i - 1];
    for (pos, &i0) in outside.iter().enumerate() {
        if !sign(i0).is_zero() {
            continue;
        }
        if let Some(&next) = outside.get(pos + 1) {
            if sign(next).is_zero() {
                return VanishingCheck::Violation {
                    kind: VanishingPattern::ConsecutiveZeros,
                    position: i0,
                };
            }
        }
        if i0 < 2 || i0 > n - 1 || pos == 0 {
            continue;
        }
        let (lo, hi) = (outside[pos - 1], outside.get(pos + 1).copied());
        if let Some(hi) = hi {
            if !sign(lo).is_zero() && sign(lo) == sign(hi) {
                return VanishingCheck::Violation {
                    kind: VanishingPattern::ZeroBetweenEqualSigns,
                    position: i0,
                };
            }
        }
    }
    VanishingCheck::Ok
}

/// All maximal minors of a matrix keyed by their ascending index set, with
/// antisymmetric lookup.
pub struct MinorTable {
    minors: HashMap<Vec<usize>, Scalar>,
}

impl MinorTable {
    /// Maximal column minors of `c`.
    pub fn columns(c: &Matrix) -> MinorTable {
        let minors = subsets(c.cols(), c.rows())
            .into_iter()
            .map(|cols| {
                let v = minor_unchecked(c, &cols);
                (cols, v)
            })
            .collect();
        MinorTable { minors }
    }

    /// Maximal row minors of `z`, i.e. the column minors of `W = 𝒵^T`.
    pub fn rows(z: &Matrix) -> MinorTable {
        MinorTable::columns(&z.transpose())
    }

    /// Minor on an arbitrary list: zero on repeats, signed by the sort.
    pub fn signed(&self, list: &[usize]) -> Scalar {
        match permutation_sign(list) {
            None => Scalar::zero(),
            Some(s) => {
                let mut key = list.to_vec();
                key.sort_unstable();
                let v = self.minors.get(&key).cloned().unwrap_or_else(Scalar::zero);
                if s < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }
}

/// Σ_i p_{A,i}(C) ⟨Y, B, i⟩ with `i` appended after A.
pub fn c_equation_residual(ctx: &TwistorContext, a: &[usize], b: &[usize]) -> Result<Scalar> {
    let c = ctx.c.as_ref().ok_or_else(|| contract("C-equations need C"))?;
    if ctx.k() == 0 || a.len() + 1 != ctx.k() {
        return Err(contract(format!("A must have k-1 entries, got {}", a.len())));
    }
    IndexList::from(a).check_range(ctx.n())?;
    let table = MinorTable::columns(&c.matrix);
    let row = ctx.twistor_row(b)?;
    Ok(c_residual_cached(&table, &row, a))
}

pub(crate) fn c_residual_cached(table: &MinorTable, row: &[Scalar], a: &[usize]) -> Scalar {
    let mut list = a.to_vec();
    list.push(0);
    let mut acc = Scalar::zero();
    for (idx, t) in row.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        *list.last_mut().expect("list is nonempty") = idx + 1;
        acc += table.signed(&list) * t;
    }
    acc
}

/// Σ_{i∈A} (−1)^{#i} p_{A∖i}(W) ⟨Y, B, i⟩ with `#i` the 1-based position of i in A.
pub fn z_equation_residual(ctx: &TwistorContext, a: &[usize], b: &[usize]) -> Result<Scalar> {
    let need = ctx.k() + ctx.m() + 1;
    if a.len() != need {
        return Err(contract(format!("A must have k+m+1={need} entries, got {}", a.len())));
    }
    if !a.windows(2).all(|w| w[0] < w[1]) {
        return Err(contract("A must be strictly ascending"));
    }
    IndexList::from(a).check_range(ctx.n())?;
    let table = MinorTable::rows(&ctx.z.matrix);
    let row = ctx.twistor_row(b)?;
    Ok(z_residual_cached(&table, &row, a))
}

pub(crate) fn z_residual_cached(table: &MinorTable, row: &[Scalar], a: &[usize]) -> Scalar {
    let mut acc = Scalar::zero();
    for (pos, &i) in a.iter().enumerate() {
        let rest: Vec<usize> = a.iter().copied().filter(|&x| x != i).collect();
        let term = table.signed(&rest) * &row[i - 1];
        // position is 1-based in the formula
        if (pos + 1) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Tallies of one exhaustive identity sweep over a context.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTally {
    pub c_equations: usize,
    pub c_failures: usize,
    pub z_equations: usize,
    pub z_failures: usize,
}

/// Evaluates every C-equation (A a (k−1)-subset, B an (m−1)-subset) and every
/// Z-equation (A a (k+m+1)-subset). `stride` keeps one A in `stride` to
/// bound the cost on large grids; 1 means exhaustive.
pub fn identity_sweep(ctx: &TwistorContext, stride: usize) -> Result<IdentityTally> {
    let (n, k, m) = (ctx.n(), ctx.k(), ctx.m());
    let stride = stride.max(1);
    let mut tally = IdentityTally::default();
    let c_table = ctx.c.as_ref().map(|c| MinorTable::columns(&c.matrix));
    let z_table = MinorTable::rows(&ctx.z.matrix);
    let c_lists: Vec<Vec<usize>> = if k >= 1 {
        subsets(n, k - 1).into_iter().step_by(stride).collect()
    } else {
        Vec::new()
    };
    let z_lists: Vec<Vec<usize>> = subsets(n, k + m + 1).into_iter().step_by(stride).collect();
    for b in subsets(n, m - 1) {
        let row = ctx.twistor_row(&b)?;
        if let Some(table) = &c_table {
            for a in &c_lists {
                tally.c_equations += 1;
                if !c_residual_cached(table, &row, a).is_zero() {
                    tally.c_failures += 1;
                }
            }
        }
        for a in &z_lists {
            tally.z_equations += 1;
            if !z_residual_cached(&z_table, &row, a).is_zero() {
                tally.z_failures += 1;
            }
        }
    }
    Ok(tally)
}

/// Number of windows whose twistor differs between the direct determinant
/// and the Cauchy–Binet expansion.
pub fn cauchy_binet_mismatches(ctx: &TwistorContext, lists: &[IndexList]) -> Result<usize> {
    let mut bad = 0;
    for l in lists {
        if ctx.twistor(l.as_slice())? != ctx.twistor_via_cauchy_binet(l.as_slice())? {
            bad += 1;
        }
    }
    Ok(bad)
}
