//! Winding number for even m by exact ray casting.
//!
//! A ray from the origin of V_Y in direction π_Y(v) crosses the open simplex
//! S(I) exactly when v = Σ_j λ_j 𝒵_{i_j} mod Y with every λ_j > 0. By
//! Cramer's rule λ_j = ⟨Y, I[j ← v]⟩ / ⟨Y, I⟩, so the test is that each
//! replacement twistor has the sign of ⟨Y, I⟩. Each hit counts sign⟨Y, I⟩.

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, window_lists_even, IndexList};
use crate::error::{contract, Error, Result};
use crate::positivity::{seeded_rng, SampleRng};
use crate::scalar::{int, serde_scalar_vec, Scalar, Sign};
use crate::twistor::{count_flips, coarse_boundary_report, TwistorContext};

/// Attempts at drawing a generic random ray before giving up.
pub const MAX_RAY_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RayDirection {
    /// Direction Σ_i c_i 𝒵_i.
    Random {
        #[serde(with = "serde_scalar_vec")]
        coefficients: Vec<Scalar>,
    },
    /// Direction 𝒵_* = Σ_t μ^t 𝒵_{terms[t]} for an infinitesimal μ > 0,
    /// with `terms = (n, n-1, ..., n-m+1)`.
    Mu { terms: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub window: IndexList,
    pub orientation: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindingResult {
    pub magnitude: u64,
    pub signed_sum: i64,
    pub hits: Vec<Hit>,
    pub ray_used: RayDirection,
}

/// The ray evaluated against one window: the lifted direction vector for a
/// random ray, or the basis for the μ-ray.
enum PreparedRay<'a> {
    Vector(Vec<Scalar>),
    Mu(&'a [usize]),
}

fn prepare<'a>(ctx: &TwistorContext, ray: &'a RayDirection) -> Result<PreparedRay<'a>> {
    match ray {
        RayDirection::Random { coefficients } => {
            if coefficients.len() != ctx.n() {
                return Err(contract(format!(
                    "ray has {} coefficients, expected n={}",
                    coefficients.len(),
                    ctx.n()
                )));
            }
            let width = ctx.k() + ctx.m();
            let mut v = vec![Scalar::zero(); width];
            for (i, c) in coefficients.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (slot, z) in v.iter_mut().zip(ctx.z.row(i + 1)) {
                    *slot += c * z;
                }
            }
            Ok(PreparedRay::Vector(v))
        }
        RayDirection::Mu { terms } => {
            if terms.len() != ctx.m() || terms.iter().any(|&t| t == 0 || t > ctx.n()) {
                return Err(contract("μ-ray terms must be m indices in [1, n]"));
            }
            Ok(PreparedRay::Mu(terms))
        }
    }
}

fn replacement_sign(ctx: &TwistorContext, window: &[usize], j: usize, ray: &PreparedRay) -> Result<Sign> {
    match ray {
        PreparedRay::Vector(v) => {
            let rows: Vec<&[Scalar]> = window
                .iter()
                .enumerate()
                .map(|(pos, &i)| if pos == j { v.as_slice() } else { ctx.z.row(i) })
                .collect();
            let s = Sign::of(&ctx.twistor_of_vectors(&rows));
            if s.is_zero() {
                return Err(Error::NonGenericRay(IndexList::from(window).to_string()));
            }
            Ok(s)
        }
        PreparedRay::Mu(terms) => {
            let mut list = window.to_vec();
            // lowest power of μ with a nonzero coefficient decides the sign
            for &t in terms.iter() {
                list[j] = t;
                let s = Sign::of(&ctx.twistor_unchecked(&list));
                if !s.is_zero() {
                    return Ok(s);
                }
            }
            Err(Error::Degenerate(format!(
                "every μ coefficient of the replacement at position {} of {} vanishes",
                j + 1,
                IndexList::from(window)
            )))
        }
    }
}

fn elementary(ctx: &TwistorContext, window: &[usize], ray: &PreparedRay) -> Result<Sign> {
    let base = Sign::of(&ctx.twistor_unchecked(window));
    if base.is_zero() {
        return Err(Error::WindingUndefined(format!(
            "⟨Y,{}⟩ vanishes",
            IndexList::from(window)
        )));
    }
    // every replacement must be checked so a non-generic ray is always caught
    let mut hit = true;
    for j in 0..window.len() {
        if replacement_sign(ctx, window, j, ray)? != base {
            hit = false;
        }
    }
    Ok(if hit { base } else { Sign::Zero })
}

/// sign⟨Y, I⟩ if the ray crosses the open simplex S(I), else zero.
pub fn elementary_winding(ctx: &TwistorContext, window: &IndexList, ray: &RayDirection) -> Result<Sign> {
    if window.len() != ctx.m() {
        return Err(contract(format!("window {window} does not have m={} entries", ctx.m())));
    }
    window.check_range(ctx.n())?;
    let prepared = prepare(ctx, ray)?;
    elementary(ctx, window.as_slice(), &prepared)
}

fn require_winding_defined(ctx: &TwistorContext) -> Result<()> {
    if ctx.m() == 0 || ctx.m() % 2 != 0 {
        return Err(contract(format!("winding number needs even m >= 2, got m={}", ctx.m())));
    }
    let report = coarse_boundary_report(ctx, false)?;
    if let Some(e) = report.first_zero() {
        return Err(Error::WindingUndefined(format!(
            "⟨Y,{}⟩ = 0, so the origin of V_Y lies on P(Y, Z)",
            e.list
        )));
    }
    Ok(())
}

fn cast(ctx: &TwistorContext, ray: RayDirection) -> Result<WindingResult> {
    let windows = window_lists_even(ctx.n(), ctx.m())?;
    let prepared = prepare(ctx, &ray)?;
    let orientations: Vec<Sign> = windows
        .par_iter()
        .map(|w| elementary(ctx, w.as_slice(), &prepared))
        .collect::<Result<_>>()?;
    let hits: Vec<Hit> = windows
        .into_iter()
        .zip(orientations)
        .filter(|(_, s)| !s.is_zero())
        .map(|(window, orientation)| Hit { window, orientation })
        .collect();
    let signed_sum: i64 = hits.iter().map(|h| i64::from(h.orientation.as_i8())).sum();
    Ok(WindingResult {
        magnitude: signed_sum.unsigned_abs(),
        signed_sum,
        hits,
        ray_used: ray,
    })
}

fn random_ray(rng: &mut SampleRng, n: usize) -> RayDirection {
    loop {
        let coefficients: Vec<Scalar> = (0..n).map(|_| int(rng.gen_range(-4..=4))).collect();
        if coefficients.iter().any(|c| !c.is_zero()) {
            return RayDirection::Random { coefficients };
        }
    }
}

/// Winding number with a seeded random ray, redrawn until it is generic.
pub fn winding_number(ctx: &TwistorContext, ray_seed: u64) -> Result<WindingResult> {
    require_winding_defined(ctx)?;
    let mut rng = seeded_rng(ray_seed);
    for _ in 0..MAX_RAY_ATTEMPTS {
        match cast(ctx, random_ray(&mut rng, ctx.n())) {
            Err(Error::NonGenericRay(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Degenerate(format!(
        "no generic ray found in {MAX_RAY_ATTEMPTS} attempts"
    )))
}

/// Winding number with a fixed ray, failing if it is not generic.
pub fn winding_with_ray(ctx: &TwistorContext, ray: RayDirection) -> Result<WindingResult> {
    require_winding_defined(ctx)?;
    cast(ctx, ray)
}

/// Winding number along 𝒵_* = 𝒵_n + μ𝒵_{n−1} + ... + μ^{m−1}𝒵_{n−m+1}, μ → 0⁺.
pub fn mu_ray_winding(ctx: &TwistorContext) -> Result<WindingResult> {
    require_winding_defined(ctx)?;
    let n = ctx.n();
    let terms = (0..ctx.m()).map(|t| n - t).collect();
    cast(ctx, RayDirection::Mu { terms })
}

/// The constant value ⌊(k+m−1)/2⌋ choose m/2.
pub fn winding_formula(k: usize, m: usize) -> Result<u64> {
    if m == 0 || m % 2 != 0 {
        return Err(contract(format!("winding formula needs even m >= 2, got m={m}")));
    }
    if k == 0 {
        return Err(contract("winding formula needs k >= 1"));
    }
    Ok(binomial(((k + m - 1) / 2) as u64, (m / 2) as u64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipRelation {
    pub w_doubled: u64,
    pub s: usize,
    /// 2w = s+1 for k odd, 2w = s for k even.
    pub consistent: bool,
    /// The strict coarse boundary conditions hold.
    pub coarse_ok: bool,
    /// 2w ≤ s+1, which holds on all of Gr^wcb.
    pub bound_ok: bool,
}

/// For m = 2 compares 2w with the sign flips s of (⟨Y,1,i⟩)_i.
///
/// The equality needs the coarse boundary conditions: they fix whether a
/// line through π(𝒵_1) meets S(1, n). Without them only the bound holds.
pub fn winding_flip_relation_m2(ctx: &TwistorContext) -> Result<FlipRelation> {
    if ctx.m() != 2 {
        return Err(contract("the flip relation is stated for m = 2"));
    }
    let w = winding_number(ctx, 0)?;
    let s = first_row_flips(ctx);
    let w_doubled = 2 * w.magnitude;
    let expected = if ctx.k() % 2 == 1 { s + 1 } else { s };
    Ok(FlipRelation {
        w_doubled,
        s,
        consistent: w_doubled == expected as u64,
        coarse_ok: coarse_boundary_report(ctx, true)?.satisfied_up_to_sign(),
        bound_ok: w_doubled <= s as u64 + 1,
    })
}

/// Sign flips of (⟨Y,1,i⟩)_{i∈[n]} for m = 2.
pub fn first_row_flips(ctx: &TwistorContext) -> usize {
    let signs: Vec<Sign> = (1..=ctx.n())
        .map(|i| Sign::of(&ctx.twistor_unchecked(&[1, i])))
        .collect();
    count_flips(&signs)
}
