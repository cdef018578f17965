//! Crossing number for odd m.
//!
//! The windows are the simplices S(i1, i1+1, ..., ir, ir+1) with m = 2r - 1.
//! The origin of V_Y lies in the relative interior of a face T of S(I) when
//! Σ_{t∈T} λ_t 𝒵_t ∈ span(Y) with λ > 0 and Σ λ_t = 1. Cells are keyed by
//! their sorted index set, so a face shared by several windows counts once.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, pair_starts, pair_windows, window_lists_odd, IndexList};
use crate::error::{contract, Error, Result};
use crate::matrix::{solve, Matrix, Solution};
use crate::positivity::{sample_vandermonde_z, GrassmannC};
use crate::scalar::{Scalar, Sign};
use crate::twistor::TwistorContext;
use crate::winding::{winding_formula, winding_number};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub vertex_indices: IndexList,
    pub dim: usize,
}

impl Cell {
    fn from_vertices(v: Vec<usize>) -> Cell {
        let dim = v.len() - 1;
        Cell { vertex_indices: IndexList(v), dim }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingResult {
    pub count: usize,
    /// Sorted by index set.
    pub cells_hit: Vec<Cell>,
    /// Windows owning at least one hit cell, in window order.
    pub simplices_hit: Vec<IndexList>,
    /// Some hit cell has dimension below m.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginTest {
    Inside,
    Outside,
    /// A barycentric numerator vanished; use [`minimal_cells_containing_origin`].
    Degenerate,
}

fn require_odd(ctx: &TwistorContext) -> Result<()> {
    if ctx.m() % 2 != 1 {
        return Err(contract(format!("crossing needs odd m, got {}", ctx.m())));
    }
    Ok(())
}

fn check_window(ctx: &TwistorContext, window: &IndexList) -> Result<()> {
    require_odd(ctx)?;
    if window.len() != ctx.m() + 1 || pair_starts(window.as_slice()).is_none() {
        return Err(contract(format!("{window} is not a crossing window for m={}", ctx.m())));
    }
    window.check_range(ctx.n())
}

/// `(-1)^a ⟨Y, I∖{i_a}⟩` for `a = 0..=m`: Cramer numerators of the
/// barycentric coordinates of the origin, up to one common factor.
pub fn barycentric_signs(ctx: &TwistorContext, window: &IndexList) -> Result<Vec<Scalar>> {
    check_window(ctx, window)?;
    Ok(barycentric_unchecked(ctx, window.as_slice()))
}

fn barycentric_unchecked(ctx: &TwistorContext, window: &[usize]) -> Vec<Scalar> {
    (0..window.len())
        .map(|a| {
            let rest: Vec<usize> = window
                .iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .map(|(_, &i)| i)
                .collect();
            let v = ctx.twistor_unchecked(&rest);
            if a % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect()
}

fn classify_values(values: &[Scalar]) -> OriginTest {
    if values.iter().any(Zero::is_zero) {
        return OriginTest::Degenerate;
    }
    let first = values[0].is_positive();
    if values.iter().all(|v| v.is_positive() == first) {
        OriginTest::Inside
    } else {
        OriginTest::Outside
    }
}

pub fn origin_in_simplex_alternating(ctx: &TwistorContext, window: &IndexList) -> Result<OriginTest> {
    Ok(classify_values(&barycentric_signs(ctx, window)?))
}

/// Whether the origin lies in the relative interior of conv(π_Y 𝒵_t, t ∈ T)
/// with those points affinely independent.
fn origin_in_face(ctx: &TwistorContext, face: &[usize]) -> Result<bool> {
    let d = ctx.k() + ctx.m();
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(d + 1);
    for r in 0..d {
        let mut row: Vec<Scalar> = face.iter().map(|&t| ctx.z.row(t)[r].clone()).collect();
        row.extend(ctx.y.matrix.row_iter().map(|y| y[r].clone()));
        rows.push(row);
    }
    let mut last = vec![Scalar::one(); face.len()];
    last.extend(std::iter::repeat(Scalar::zero()).take(ctx.k()));
    rows.push(last);
    let a = Matrix::from_rows(rows, face.len() + ctx.k())?;
    let mut rhs = vec![Scalar::zero(); d];
    rhs.push(Scalar::one());
    match solve(&a, &rhs)? {
        Solution::Unique(x) => Ok(x[..face.len()].iter().all(Signed::is_positive)),
        Solution::Many | Solution::Inconsistent => Ok(false),
    }
}

fn minimal_cells_unchecked(ctx: &TwistorContext, window: &[usize]) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << window.len()) {
        let face: Vec<usize> = window
            .iter()
            .enumerate()
            .filter(|&(b, _)| mask & (1 << b) != 0)
            .map(|(_, &i)| i)
            .collect();
        if origin_in_face(ctx, &face)? {
            out.push(Cell::from_vertices(face));
        }
    }
    out.sort();
    Ok(out)
}

/// Every face of S(I) whose relative interior contains the origin.
pub fn minimal_cells_containing_origin(ctx: &TwistorContext, window: &IndexList) -> Result<Vec<Cell>> {
    check_window(ctx, window)?;
    minimal_cells_unchecked(ctx, window.as_slice())
}

fn assemble(per_window: Vec<(IndexList, Vec<Cell>)>, m: usize) -> CrossingResult {
    let mut cells = BTreeSet::new();
    let mut simplices_hit = Vec::new();
    for (window, hit) in per_window {
        if !hit.is_empty() {
            simplices_hit.push(window);
        }
        cells.extend(hit);
    }
    let cells_hit: Vec<Cell> = cells.into_iter().collect();
    CrossingResult {
        count: cells_hit.len(),
        degenerate: cells_hit.iter().any(|c| c.dim < m),
        cells_hit,
        simplices_hit,
    }
}

pub(crate) fn crossing_over(ctx: &TwistorContext, windows: &[IndexList], force_general: bool) -> Result<CrossingResult> {
    let values: Vec<Vec<Scalar>> = windows
        .par_iter()
        .map(|w| barycentric_unchecked(ctx, w.as_slice()))
        .collect();
    let generic = values.iter().all(|v| v.iter().all(|x| !x.is_zero()));
    let per_window: Vec<(IndexList, Vec<Cell>)> = if generic && !force_general {
        windows
            .iter()
            .zip(&values)
            .map(|(w, v)| {
                let hit = match classify_values(v) {
                    OriginTest::Inside => vec![Cell::from_vertices(w.0.clone())],
                    _ => Vec::new(),
                };
                (w.clone(), hit)
            })
            .collect()
    } else {
        windows
            .par_iter()
            .map(|w| Ok((w.clone(), minimal_cells_unchecked(ctx, w.as_slice())?)))
            .collect::<Result<_>>()?
    };
    Ok(assemble(per_window, ctx.m()))
}

/// Number of distinct cells whose relative interior contains the origin.
///
/// When no barycentric numerator vanishes this is the number of windows
/// with alternating signs; otherwise every face of every window is tested.
pub fn crossing_number(ctx: &TwistorContext) -> Result<CrossingResult> {
    require_odd(ctx)?;
    let windows = window_lists_odd(ctx.n(), ctx.m())?;
    crossing_over(ctx, &windows, false)
}

/// [`crossing_number`] without the alternating-sign shortcut.
pub fn crossing_number_general(ctx: &TwistorContext) -> Result<CrossingResult> {
    require_odd(ctx)?;
    let windows = window_lists_odd(ctx.n(), ctx.m())?;
    crossing_over(ctx, &windows, true)
}

pub fn crossing_formula(k: usize, m: usize) -> Result<u64> {
    if m % 2 != 1 {
        return Err(contract(format!("crossing formula needs odd m, got {m}")));
    }
    if k == 0 {
        return Err(contract("crossing formula needs k >= 1"));
    }
    let (k64, m64) = (k as u64, m as u64);
    if k % 2 == 0 {
        return Ok(2 * binomial((k64 + m64 - 1) / 2, (m64 + 1) / 2));
    }
    let num = (2 * k64 + m64 - 1) * binomial((k64 + m64 - 2) / 2, (m64 - 1) / 2);
    if num % (m64 + 1) != 0 {
        return Err(Error::Internal(format!("crossing formula not integral at k={k}, m={m}")));
    }
    Ok(num / (m64 + 1))
}

/// A cell is a boundary cell when it is a face of a list `(1, J)` with `J`
/// made of `(m-1)/2` pairs inside `[2, n]`, or of `(J, n)` with `J` inside
/// `[1, n-1]`. These are the lists of the odd coarse boundary conditions.
pub fn is_internal_cell(cell: &IndexList, n: usize, m: usize) -> bool {
    let pairs = (m + 1) / 2 - 1;
    let fits = |drop: usize, lo: usize, hi: usize| {
        let rest: Vec<usize> = cell.iter().copied().filter(|&t| t != drop).collect();
        lo <= hi && pair_windows(lo, hi, pairs).iter().any(|j| rest.iter().all(|t| j.contains(*t)))
    };
    !(fits(1, 2, n) || fits(n, 1, n.saturating_sub(1)))
}

/// The other window vertex `ī` with `S(I, ī)` an ancestor of the internal
/// (m-1)-cell `I`, given one ancestor `S(I, i)`.
pub fn conjugate_vertex(cell: &IndexList, i: usize, n: usize) -> Result<usize> {
    let m = cell.len();
    if m % 2 != 1 {
        return Err(contract(format!("an (m-1)-cell has m vertices with m odd, got {m}")));
    }
    if !cell.is_strictly_ascending() || cell.contains(i) || i == 0 || i > n {
        return Err(contract(format!("bad cell {cell} or vertex {i}")));
    }
    cell.check_range(n)?;
    let full = cell.with(&[i]).sorted();
    let starts = pair_starts(full.as_slice())
        .ok_or_else(|| contract(format!("{full} is not a crossing window")))?;
    if !is_internal_cell(cell, n, m) {
        return Err(contract(format!("cell {cell} is not internal for n={n}")));
    }
    let outside = |j: usize| !cell.contains(j);
    let found = if starts.contains(&i) {
        (i + 2..=n).find(|&j| outside(j))
    } else {
        (1..i.saturating_sub(1)).rev().find(|&j| outside(j))
    };
    found.ok_or_else(|| Error::Internal(format!("no conjugate of {i} for internal cell {cell}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub cell: IndexList,
    pub vertex: usize,
    pub conjugate: usize,
    pub opposite_sides: bool,
}

/// Side test of `Z_i` and `Z_ī` against the hyperplane H through the cell
/// `I` and the origin.
///
/// H is spanned by `Z_B` for `B = I∖{i0}`, so the sides are the signs of
/// `⟨Y, B, i⟩` and `⟨Y, B, ī⟩`. Vertices strictly between `i` and `ī` are
/// tried first for `i0`.
pub fn half_space_diagnostic(ctx: &TwistorContext, cell: &IndexList, i: usize) -> Result<HalfSpace> {
    require_odd(ctx)?;
    if cell.len() != ctx.m() {
        return Err(contract(format!("an (m-1)-cell has {} vertices", ctx.m())));
    }
    let conj = conjugate_vertex(cell, i, ctx.n())?;
    if !ctx.twistor_unchecked(cell.as_slice()).is_zero() {
        return Err(contract(format!("origin is not on the hyperplane of {cell}")));
    }
    let (lo, hi) = (i.min(conj), i.max(conj));
    let mut order: Vec<usize> = (0..cell.len()).collect();
    order.sort_by_key(|&p| !(lo < cell.0[p] && cell.0[p] < hi));
    for p in order {
        let b = cell.without_position(p);
        let side = |v: usize| Sign::of(&ctx.twistor_unchecked(b.with(&[v]).as_slice()));
        let (s, t) = (side(i), side(conj));
        if s.is_zero() && t.is_zero() {
            continue;
        }
        if s.is_zero() || t.is_zero() {
            return Err(Error::Degenerate(format!("an ancestor of {cell} is flat")));
        }
        return Ok(HalfSpace {
            cell: cell.clone(),
            vertex: i,
            conjugate: conj,
            opposite_sides: s != t,
        });
    }
    Err(Error::Degenerate(format!("cell {cell} does not span a hyperplane")))
}

/// Half-space diagnostics for every internal (m-1)-cell containing a
/// lower-dimensional hit cell, one per ancestor pair.
pub fn degenerate_hit_diagnostics(ctx: &TwistorContext, result: &CrossingResult) -> Result<Vec<HalfSpace>> {
    require_odd(ctx)?;
    let (n, m) = (ctx.n(), ctx.m());
    let windows = window_lists_odd(n, m)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for hit in result.cells_hit.iter().filter(|c| c.dim < m) {
        for w in &windows {
            if !hit.vertex_indices.iter().all(|t| w.contains(*t)) {
                continue;
            }
            for p in 0..w.len() {
                let cell = w.without_position(p);
                let vertex = w.0[p];
                if !hit.vertex_indices.iter().all(|t| cell.contains(*t)) || !is_internal_cell(&cell, n, m) {
                    continue;
                }
                let conj = conjugate_vertex(&cell, vertex, n)?;
                if seen.insert((cell.clone(), vertex.min(conj))) {
                    out.push(half_space_diagnostic(ctx, &cell, vertex)?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingWindingRelation {
    pub k: usize,
    pub m: usize,
    pub crossing: u64,
    pub winding_above: u64,
    /// Absent for k odd and m = 1, where the relation would need m - 1 = 0.
    pub winding_below: Option<u64>,
    /// `None` when the relation is not checked.
    pub holds: Option<bool>,
    /// The same relation evaluated on the closed formulas.
    pub formulas_agree: Option<bool>,
}

/// `c = 2 w_{m+1} - w_{m-1}` (k odd) or `c = 2 w_{m+1}` (k even), with all
/// three numbers computed from `Y = C𝒵` for Vandermonde 𝒵 on the same nodes.
pub fn crossing_winding_relation(c: &GrassmannC, nodes: &[Scalar], m: usize) -> Result<CrossingWindingRelation> {
    if m % 2 != 1 {
        return Err(contract(format!("relation needs odd m, got {m}")));
    }
    let (k, n) = (c.k, c.n);
    let ctx_at = |mm: usize| -> Result<TwistorContext> {
        TwistorContext::from_c(c.clone(), sample_vandermonde_z(n, k, mm, nodes)?)
    };
    let crossing = crossing_number(&ctx_at(m)?)?.count as u64;
    let winding_above = winding_number(&ctx_at(m + 1)?, 0)?.magnitude;
    let skip = k % 2 == 1 && m == 1;
    let winding_below = if k % 2 == 1 && !skip {
        Some(winding_number(&ctx_at(m - 1)?, 0)?.magnitude)
    } else {
        None
    };
    let rhs = |above: u64, below: Option<u64>| (2 * above).checked_sub(below.unwrap_or(0));
    let (holds, formulas_agree) = if skip {
        (None, None)
    } else {
        let below_formula = if k % 2 == 1 { Some(winding_formula(k, m - 1)?) } else { None };
        let f = rhs(winding_formula(k, m + 1)?, below_formula) == Some(crossing_formula(k, m)?);
        (Some(rhs(winding_above, winding_below) == Some(crossing)), Some(f))
    };
    Ok(CrossingWindingRelation { k, m, crossing, winding_above, winding_below, holds, formulas_agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::subsets;
    use crate::positivity::{
        pad_with_zero_column, random_nodes, random_tnn_weights, sample_positive_c,
        sample_tnn_boundary_c, seeded_rng,
    };
    use crate::scalar::int;
    use proptest::prelude::*;

    fn running_example() -> TwistorContext {
        let nodes: Vec<Scalar> = (1..=3).map(int).collect();
        let z = sample_vandermonde_z(3, 1, 1, &nodes).unwrap();
        let c = GrassmannC::classify(Matrix::from_i64(&[&[0, 3, 0]])).unwrap();
        let ctx = TwistorContext::from_c(c, z).unwrap();
        assert_eq!(ctx.y.matrix, Matrix::from_i64(&[&[3, 6]]));
        ctx
    }

    fn random_ctx(seed: u64, n: usize, k: usize, m: usize) -> TwistorContext {
        let mut rng = seeded_rng(seed);
        let z = sample_vandermonde_z(n, k, m, &random_nodes(&mut rng, n)).unwrap();
        let c = sample_positive_c(k, n, &random_nodes(&mut rng, k)).unwrap();
        TwistorContext::from_c(c, z).unwrap()
    }

    fn tnn_ctx(seed: u64, n: usize, k: usize, m: usize) -> TwistorContext {
        let mut rng = seeded_rng(seed);
        let z = sample_vandermonde_z(n, k, m, &random_nodes(&mut rng, n)).unwrap();
        loop {
            let w = random_tnn_weights(&mut rng, n, 0.3);
            let c = sample_tnn_boundary_c(k, n, &w).unwrap();
            if c.matrix.rank() == k {
                return TwistorContext::from_c(c, z).unwrap();
            }
        }
    }

    /// m = 1: V_Y is a line with coordinate x_i = ⟨Y, i⟩. Cells are the
    /// vertices with x_i = 0 and the segments (i, i+1) with 0 strictly
    /// between the endpoints.
    fn line_oracle(ctx: &TwistorContext) -> usize {
        let x: Vec<Sign> = (1..=ctx.n()).map(|i| Sign::of(&ctx.twistor(&[i]).unwrap())).collect();
        let vertices = x.iter().filter(|s| s.is_zero()).count();
        let segments = x
            .windows(2)
            .filter(|p| !p[0].is_zero() && !p[1].is_zero() && p[0] != p[1])
            .count();
        vertices + segments
    }

    #[test]
    fn running_example_hits_a_vertex_once() {
        let ctx = running_example();
        let w = IndexList::new(vec![1, 2]);
        assert_eq!(barycentric_signs(&ctx, &w).unwrap(), vec![int(0), int(3)]);
        assert_eq!(origin_in_simplex_alternating(&ctx, &w).unwrap(), OriginTest::Degenerate);
        let cells = minimal_cells_containing_origin(&ctx, &w).unwrap();
        assert_eq!(cells, vec![Cell::from_vertices(vec![2])]);
        let res = crossing_number(&ctx).unwrap();
        assert_eq!(res.count, 1);
        assert!(res.degenerate);
        assert_eq!(res.simplices_hit.len(), 2);
        assert_eq!(res.count as u64, crossing_formula(1, 1).unwrap());
        let diag = degenerate_hit_diagnostics(&ctx, &res).unwrap();
        assert_eq!(diag.len(), 1);
        assert_eq!((diag[0].vertex, diag[0].conjugate), (1, 3));
        assert!(diag[0].opposite_sides);
    }

    #[test]
    fn inside_and_outside_m3() {
        // k=1, m=3, n=4: the only window is the whole tetrahedron
        let ctx = random_ctx(3, 4, 1, 3);
        let w = IndexList::new(vec![1, 2, 3, 4]);
        assert_eq!(origin_in_simplex_alternating(&ctx, &w).unwrap(), OriginTest::Inside);
        assert_eq!(minimal_cells_containing_origin(&ctx, &w).unwrap(), vec![Cell::from_vertices(vec![1, 2, 3, 4])]);
        // Y = 𝒵_1 + 𝒵_2 + 𝒵_3 - 𝒵_4 puts the origin outside
        let rows: Vec<Scalar> = (0..4)
            .map(|r| {
                ctx.z.row(1)[r].clone() + ctx.z.row(2)[r].clone() + ctx.z.row(3)[r].clone()
                    - ctx.z.row(4)[r].clone()
            })
            .collect();
        let out = ctx.with_y(Matrix::from_rows(vec![rows], 4).unwrap()).unwrap();
        assert_eq!(origin_in_simplex_alternating(&out, &w).unwrap(), OriginTest::Outside);
        assert!(minimal_cells_containing_origin(&out, &w).unwrap().is_empty());
        assert_eq!(crossing_number(&out).unwrap().count, 0);
    }

    #[test]
    fn flat_simplex_has_zero_coordinates() {
        // Y = 𝒵_1, 𝒵_2 makes every 1-face through them degenerate; k=2, m=1
        let ctx = random_ctx(5, 4, 2, 1);
        let y = Matrix::from_rows(vec![ctx.z.row(1).to_vec(), ctx.z.row(2).to_vec()], 3).unwrap();
        let flat = ctx.with_y(y).unwrap();
        let w = IndexList::new(vec![1, 2]);
        assert!(barycentric_signs(&flat, &w).unwrap().iter().all(Zero::is_zero));
        // both endpoints project to the origin; the segment itself is not a cell
        let cells = minimal_cells_containing_origin(&flat, &w).unwrap();
        assert_eq!(cells, vec![Cell::from_vertices(vec![1]), Cell::from_vertices(vec![2])]);
    }

    #[test]
    fn formula_values() {
        assert_eq!(crossing_formula(1, 1).unwrap(), 1);
        assert_eq!(crossing_formula(3, 1).unwrap(), 3);
        assert_eq!(crossing_formula(2, 3).unwrap(), 2);
        assert_eq!(crossing_formula(3, 3).unwrap(), 4);
        assert_eq!(crossing_formula(1, 3).unwrap(), 1);
        assert!(crossing_formula(2, 2).is_err());
        for k in 1..8 {
            for m in [1, 3, 5, 7] {
                crossing_formula(k, m).unwrap();
            }
        }
    }

    fn exhaustive_ancestors(cell: &IndexList, n: usize) -> Vec<usize> {
        (1..=n)
            .filter(|&i| !cell.contains(i) && pair_starts(cell.with(&[i]).sorted().as_slice()).is_some())
            .collect()
    }

    #[test]
    fn conjugate_examples() {
        let cell = IndexList::new(vec![2, 5, 6]);
        assert_eq!(conjugate_vertex(&cell, 1, 7).unwrap(), 3);
        assert_eq!(conjugate_vertex(&cell, 3, 7).unwrap(), 1);
        // I = {i+1, j, j+1}, vertex i gives i+2
        let cell = IndexList::new(vec![4, 7, 8]);
        assert_eq!(conjugate_vertex(&cell, 3, 10).unwrap(), 5);
        assert!(matches!(
            conjugate_vertex(&IndexList::new(vec![1, 4, 5]), 2, 7),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn conjugate_is_the_other_ancestor_and_an_involution() {
        for n in 2..=8 {
            for m in [1, 3, 5] {
                if n < m + 1 {
                    continue;
                }
                for v in subsets(n, m) {
                    let cell = IndexList::new(v);
                    let anc = exhaustive_ancestors(&cell, n);
                    if anc.is_empty() {
                        continue;
                    }
                    // internal exactly when there are two ancestors
                    assert_eq!(is_internal_cell(&cell, n, m), anc.len() == 2, "n={n} cell={cell}");
                    if anc.len() != 2 {
                        continue;
                    }
                    let c = conjugate_vertex(&cell, anc[0], n).unwrap();
                    assert_eq!(c, anc[1], "n={n} cell={cell}");
                    assert_eq!(conjugate_vertex(&cell, c, n).unwrap(), anc[0]);
                }
            }
        }
    }

    #[test]
    fn same_side_configuration_outside_the_amplituhedron() {
        // k=2, m=1, Y = span(𝒵_2, 𝒵_1 - 𝒵_3): ⟨Y,1⟩ and ⟨Y,3⟩ share a sign
        let ctx = random_ctx(9, 4, 2, 1);
        let diff: Vec<Scalar> = (0..3).map(|r| ctx.z.row(1)[r].clone() - ctx.z.row(3)[r].clone()).collect();
        let y = Matrix::from_rows(vec![ctx.z.row(2).to_vec(), diff], 3).unwrap();
        let bad = ctx.with_y(y).unwrap();
        let cell = IndexList::new(vec![2]);
        let d = half_space_diagnostic(&bad, &cell, 1).unwrap();
        assert_eq!(d.conjugate, 3);
        assert!(!d.opposite_sides);
        // Y = span(𝒵_1, 𝒵_2): the ancestor S(1,2) is flat
        let y = Matrix::from_rows(vec![ctx.z.row(1).to_vec(), ctx.z.row(2).to_vec()], 3).unwrap();
        let flat = ctx.with_y(y).unwrap();
        assert!(matches!(half_space_diagnostic(&flat, &cell, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn internal_cells_m3() {
        let n = 8;
        assert!(is_internal_cell(&IndexList::new(vec![3, 5, 6]), n, 3));
        assert!(!is_internal_cell(&IndexList::new(vec![1, 4, 5]), n, 3));
        assert!(!is_internal_cell(&IndexList::new(vec![4, 5, 8]), n, 3));
        assert!(!is_internal_cell(&IndexList::new(vec![4]), n, 3));
        // faces of (1, 2, n-1, n) touch both ends
        assert!(!is_internal_cell(&IndexList::new(vec![1, 2, 8]), n, 3));
        assert!(!is_internal_cell(&IndexList::new(vec![1, 7, 8]), n, 3));
        assert!(is_internal_cell(&IndexList::new(vec![2]), 3, 1));
        assert!(!is_internal_cell(&IndexList::new(vec![1]), 3, 1));
    }

    #[test]
    fn relation_examples() {
        for (k, m, n) in [(2, 3, 7), (3, 3, 8), (1, 3, 6), (2, 1, 5), (1, 1, 4)] {
            let mut rng = seeded_rng(k as u64 * 10 + m as u64);
            let nodes = random_nodes(&mut rng, n);
            let c = sample_positive_c(k, n, &random_nodes(&mut rng, k)).unwrap();
            let rel = crossing_winding_relation(&c, &nodes, m).unwrap();
            if k % 2 == 1 && m == 1 {
                assert_eq!(rel.holds, None);
            } else {
                assert_eq!(rel.holds, Some(true), "{rel:?}");
                assert_eq!(rel.formulas_agree, Some(true), "{rel:?}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn theorem_and_fast_path(seed in any::<u64>(), k in 1usize..5, r in 1usize..3, extra in 0usize..3) {
            let m = 2 * r - 1;
            let n = k + m + extra;
            let ctx = random_ctx(seed, n, k, m);
            let fast = crossing_number(&ctx).unwrap();
            prop_assert_eq!(fast.count as u64, crossing_formula(k, m).unwrap());
            let general = crossing_number_general(&ctx).unwrap();
            prop_assert_eq!(&fast, &general);
            let mut rev = window_lists_odd(n, m).unwrap();
            rev.reverse();
            prop_assert_eq!(crossing_over(&ctx, &rev, true).unwrap().cells_hit, fast.cells_hit);
        }

        #[test]
        fn line_oracle_agrees(seed in any::<u64>(), k in 1usize..5, extra in 0usize..4, tnn in any::<bool>()) {
            let n = k + 1 + extra;
            let ctx = if tnn { tnn_ctx(seed, n, k, 1) } else { random_ctx(seed, n, k, 1) };
            prop_assert_eq!(crossing_number(&ctx).unwrap().count, line_oracle(&ctx));
        }

        #[test]
        fn padding_keeps_crossing(seed in any::<u64>(), k in 1usize..4, r in 1usize..3) {
            let m = 2 * r - 1;
            let n = k + m;
            let mut rng = seeded_rng(seed);
            let xs = random_nodes(&mut rng, n + 1);
            let c = sample_positive_c(k, n, &random_nodes(&mut rng, k)).unwrap();
            let ctx = TwistorContext::from_c(c.clone(), sample_vandermonde_z(n, k, m, &xs[..n]).unwrap()).unwrap();
            let padded = TwistorContext::from_c(pad_with_zero_column(&c), sample_vandermonde_z(n + 1, k, m, &xs).unwrap()).unwrap();
            prop_assert_eq!(crossing_number(&padded).unwrap().count, crossing_number(&ctx).unwrap().count);
        }
    }
}
