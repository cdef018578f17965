//! Membership in A_{n,k,2}: coarse boundary signs plus maximal winding.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::IndexList;
use crate::error::{contract, Error, Result};
use crate::matrix::{det_rows, Matrix};
use crate::positivity::{
    random_nodes, random_tnn_weights, sample_tnn_boundary_c, sample_vandermonde_z, PositivityClass,
    SampleRng,
};
use crate::scalar::{int, Scalar};
use crate::twistor::{coarse_boundary_lists, coarse_boundary_report, TwistorContext};
use crate::winding::{first_row_flips, winding_number};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Inside,
    Outside,
    CoarseBoundaryHit,
    /// Only m = 2 is decided; other m report invariants without a verdict.
    Unproven,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub winding_magnitude: u64,
    pub coarse_ok: bool,
    pub flips_of_first_row: usize,
}

/// Coarse conditions are checked up to the orientation of the Y
/// representative, so `Y` and any row mixing of it get the same verdict.
pub fn membership_m2(ctx: &TwistorContext) -> Result<MembershipVerdict> {
    if ctx.m() != 2 {
        return Err(contract(format!("membership is decided for m = 2 only, got m={}", ctx.m())));
    }
    let flips = first_row_flips(ctx);
    let report = coarse_boundary_report(ctx, true)?;
    if report.first_zero().is_some() {
        return Ok(MembershipVerdict {
            verdict: Verdict::CoarseBoundaryHit,
            winding_magnitude: 0,
            coarse_ok: false,
            flips_of_first_row: flips,
        });
    }
    let coarse_ok = report.satisfied_up_to_sign();
    let w = winding_number(ctx, 0)?.magnitude;
    let inside = coarse_ok && w == ((ctx.k() + 1) / 2) as u64;
    Ok(MembershipVerdict {
        verdict: if inside { Verdict::Inside } else { Verdict::Outside },
        winding_magnitude: w,
        coarse_ok,
        flips_of_first_row: flips,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignFlipMembership {
    pub flips: usize,
    /// `flips == k`.
    pub maximal: bool,
    pub coarse_ok: bool,
    /// Maximal flips together with the coarse conditions.
    pub member: bool,
}

/// The sign-flip description of A_{n,k,2}: the coarse conditions hold and
/// (⟨Y,1,i⟩)_{i∈[n]} has exactly k sign flips.
pub fn signflip_membership_m2(ctx: &TwistorContext) -> Result<SignFlipMembership> {
    if ctx.m() != 2 {
        return Err(contract(format!("sign-flip membership is for m = 2, got m={}", ctx.m())));
    }
    let flips = first_row_flips(ctx);
    let maximal = flips == ctx.k();
    let coarse_ok = coarse_boundary_report(ctx, true)?.satisfied_up_to_sign();
    Ok(SignFlipMembership { flips, maximal, coarse_ok, member: maximal && coarse_ok })
}

/// `Y = C𝒵` with C from a planar network with all weights positive.
pub fn construct_inside(rng: &mut SampleRng, n: usize, k: usize, m: usize) -> Result<TwistorContext> {
    let z = sample_vandermonde_z(n, k, m, &random_nodes(rng, n))?;
    let c = sample_tnn_boundary_c(k, n, &random_tnn_weights(rng, n, 0.0))?;
    if c.class != PositivityClass::StrictlyPositive {
        return Err(Error::Internal("positive planar network gave a boundary point".into()));
    }
    TwistorContext::from_c(c, z)
}

/// Attempts per outside construction before giving up.
const OUTSIDE_ATTEMPTS: usize = 256;

/// A labelled outside point for m = 2: starting from an inside point, the
/// first row of Y is moved along a random vector u by exactly the amount
/// that negates ⟨Y, W⟩ for a random coarse list W.
///
/// The result is kept only when the coarse conditions fail for both
/// orientations and no coarse twistor vanishes. Since every point of A
/// satisfies them, such a Y is outside. Returns the context and W.
pub fn construct_outside(rng: &mut SampleRng, n: usize, k: usize) -> Result<(TwistorContext, IndexList)> {
    let base = construct_inside(rng, n, k, 2)?;
    let lists = coarse_boundary_lists(n, k, 2)?;
    let d = k + 2;
    for _ in 0..OUTSIDE_ATTEMPTS {
        let (w, _) = &lists[rng.gen_range(0..lists.len())];
        let u: Vec<Scalar> = (0..d).map(|_| int(rng.gen_range(-5..=5))).collect();
        let target = base.twistor_unchecked(w.as_slice());
        let mut rows: Vec<&[Scalar]> = vec![u.as_slice()];
        rows.extend(base.y.matrix.row_iter().skip(1));
        rows.extend(w.iter().map(|&i| base.z.row(i)));
        let slope = det_rows(rows);
        if slope.is_zero() {
            continue;
        }
        let t = -(int(2) * target) / slope;
        let mut y = base.y.matrix.to_rows();
        for (entry, du) in y[0].iter_mut().zip(&u) {
            *entry += &t * du;
        }
        let y = Matrix::from_rows(y, d)?;
        if y.rank() != k {
            continue;
        }
        let ctx = base.with_y(y)?;
        let report = coarse_boundary_report(&ctx, true)?;
        if report.first_zero().is_none() && !report.satisfied_up_to_sign() {
            return Ok((ctx, w.clone()));
        }
    }
    Err(Error::Internal(format!("no outside point found for n={n}, k={k}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::{random_full_rank, sample_positive_c, seeded_rng};
    use crate::winding::winding_formula;

    fn triangle() -> TwistorContext {
        let nodes: Vec<Scalar> = (1..=3).map(int).collect();
        let z = sample_vandermonde_z(3, 1, 2, &nodes).unwrap();
        let c = sample_positive_c(1, 3, &[int(1)]).unwrap();
        TwistorContext::from_c(c, z).unwrap()
    }

    #[test]
    fn triangle_is_inside() {
        let v = membership_m2(&triangle()).unwrap();
        assert_eq!(v.verdict, Verdict::Inside);
        assert_eq!((v.winding_magnitude, v.flips_of_first_row), (1, 1));
        let s = signflip_membership_m2(&triangle()).unwrap();
        assert!(s.maximal && s.member);
    }

    #[test]
    fn positive_k1_n4_inside_and_examples() {
        let mut rng = seeded_rng(1);
        let ctx = construct_inside(&mut rng, 4, 1, 2).unwrap();
        assert_eq!(membership_m2(&ctx).unwrap().verdict, Verdict::Inside);

        // Y spanned by v = 𝒵_1 + 𝒵_2 sits on ⟨Y,1,2⟩ = 0
        let v: Vec<Scalar> = (0..3).map(|r| ctx.z.row(1)[r].clone() + ctx.z.row(2)[r].clone()).collect();
        let hit = ctx.with_y(Matrix::from_rows(vec![v], 3).unwrap()).unwrap();
        assert_eq!(membership_m2(&hit).unwrap().verdict, Verdict::CoarseBoundaryHit);

        let (outside, _) = construct_outside(&mut rng, 4, 1).unwrap();
        let report = coarse_boundary_report(&outside, true).unwrap();
        assert!(report.entries.iter().any(|e| !e.satisfied));
        assert_eq!(membership_m2(&outside).unwrap().verdict, Verdict::Outside);
    }

    #[test]
    fn wrong_m_is_a_contract_error() {
        let mut rng = seeded_rng(2);
        let ctx = construct_inside(&mut rng, 5, 1, 3).unwrap();
        assert!(matches!(membership_m2(&ctx), Err(Error::Contract(_))));
    }

    #[test]
    fn labelled_samples_agree_with_sign_flips() {
        for k in 1..=4 {
            for n in k + 2..=k + 5 {
                let mut rng = seeded_rng((n * 10 + k) as u64);
                for _ in 0..4 {
                    let inside = construct_inside(&mut rng, n, k, 2).unwrap();
                    let v = membership_m2(&inside).unwrap();
                    assert_eq!(v.verdict, Verdict::Inside, "n={n} k={k}");
                    assert_eq!(v.winding_magnitude, winding_formula(k, 2).unwrap());
                    let s = signflip_membership_m2(&inside).unwrap();
                    assert!(s.member && s.maximal);

                    let (outside, _) = construct_outside(&mut rng, n, k).unwrap();
                    let v = membership_m2(&outside).unwrap();
                    assert_eq!(v.verdict, Verdict::Outside, "n={n} k={k}");
                    assert!(!signflip_membership_m2(&outside).unwrap().member);
                }
            }
        }
    }

    #[test]
    fn row_mixing_keeps_the_verdict() {
        let mut rng = seeded_rng(8);
        for k in 1..=3 {
            let ctx = construct_inside(&mut rng, k + 3, k, 2).unwrap();
            let mix = random_full_rank(&mut rng, k, k, 3);
            let mixed = ctx.with_y(mix.mul(&ctx.y.matrix).unwrap()).unwrap();
            assert_eq!(membership_m2(&mixed).unwrap().verdict, Verdict::Inside);
        }
    }

    #[test]
    fn winding_bound_on_unconstrained_points() {
        for k in 1..=4 {
            let mut rng = seeded_rng(100 + k as u64);
            let base = construct_inside(&mut rng, k + 3, k, 2).unwrap();
            for _ in 0..200 {
                let y = random_full_rank(&mut rng, k, k + 2, 6);
                let ctx = base.with_y(y).unwrap();
                let v = membership_m2(&ctx).unwrap();
                assert!(v.winding_magnitude <= ((k + 1) / 2) as u64);
                if v.verdict != Verdict::CoarseBoundaryHit {
                    let s = signflip_membership_m2(&ctx).unwrap();
                    assert_eq!(v.verdict == Verdict::Inside, s.member, "k={k} {v:?} {s:?}");
                }
            }
        }
    }
}
