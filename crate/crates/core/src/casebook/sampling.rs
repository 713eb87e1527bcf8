//! Random Laurent polynomials with hypothesized support structure.
//!
//! The polygon reductions shear along y -> y + alpha x^-k. Writing each
//! grading level w = i - k j as x^w h_w(z) with z = x^k y, the shear acts
//! level-by-level as z -> z + alpha, so a level retracts to order kappa in z
//! exactly when (z - alpha)^kappa divides h_w. The sampler reads kappa off
//! the claimed output polygon and produces h_w = z^a (z - alpha)^kappa r_w(z)
//! with random r_w, which realizes the hypothesized divisibility structure
//! with the stated edge forms as its extreme levels.

use std::collections::BTreeMap;

use crate::error::{AlgError, Result};
use crate::exactalg::{Rat, Scalar};
use crate::laurent::LaurentPoly;
use crate::newton::NewtonPolygon;
use crate::rng::Rng;

pub fn scale_corners(corners: &[(i64, i64)], m: i64) -> Vec<(i64, i64)> {
    corners.iter().map(|&(i, j)| (m * i, m * j)).collect()
}

pub fn transpose_corners(corners: &[(i64, i64)]) -> Vec<(i64, i64)> {
    corners.iter().map(|&(i, j)| (j, i)).collect()
}

/// Random polynomial on the lattice of `hull` with every corner attained.
pub fn sample_on_hull(hull: &NewtonPolygon, rng: &mut Rng) -> LaurentPoly<Rat> {
    let corners: Vec<(i64, i64)> = hull.vertex_set_int().expect("integer corners");
    let mut p = LaurentPoly::zero();
    for (i, j) in hull.lattice_points() {
        let c = if corners.contains(&(i, j)) {
            rng.nonzero_rat()
        } else if rng.below(3) != 0 {
            rng.rat()
        } else {
            Rat::from_int(0)
        };
        p = p.add(&LaurentPoly::monomial(c, i, j));
    }
    p
}

/// Sample a polynomial with hull exactly `hull_in`, structured so that the
/// shear y -> y + alpha x^-k carries its hull into `target` (when given):
/// per level w the required retraction kappa is the lowest admissible z-order
/// of the target on that line, raised further by any explicit override
/// (used to force a stated edge form).
pub fn sample_shear_structured(
    hull_in: &NewtonPolygon,
    target: Option<&NewtonPolygon>,
    k: i64,
    alpha: &Rat,
    overrides: &[(i64, i64)],
    rng: &mut Rng,
) -> Result<LaurentPoly<Rat>> {
    if alpha.is_zero() {
        return Err(AlgError::Precondition("shear constant must be nonzero".into()));
    }
    // group the input lattice by shear-grading level
    let mut levels: BTreeMap<i64, (i64, i64)> = BTreeMap::new(); // w -> (j_min, j_max)
    for (i, j) in hull_in.lattice_points() {
        let w = i - k * j;
        levels
            .entry(w)
            .and_modify(|(lo, hi)| {
                *lo = (*lo).min(j);
                *hi = (*hi).max(j);
            })
            .or_insert((j, j));
    }

    let mut poly = LaurentPoly::zero();
    for (&w, &(a_in, b_in)) in &levels {
        // admissible j-range of the target polygon on this level line
        let (mut kappa, b_eff) = match target {
            Some(out) => {
                let out_range: Vec<i64> = (0..=b_in)
                    .filter(|&j| out.contains_int(w + k * j, j))
                    .collect();
                let Some(&lo) = out_range.first() else {
                    continue; // level absent from the target: hypothesized zero
                };
                (lo, (*out_range.last().unwrap()).min(b_in))
            }
            None => (0, b_in),
        };
        if let Some(&(_, forced)) = overrides.iter().find(|(lw, _)| *lw == w) {
            kappa = kappa.max(forced);
        }
        if a_in + kappa > b_eff {
            continue; // no room for the required retraction: hypothesized zero
        }
        let r_deg = (b_eff - a_in - kappa) as usize;
        // r with nonzero constant, leading, and r(alpha) != 0
        let r = loop {
            let mut coeffs: Vec<Rat> = (0..=r_deg).map(|_| rng.rat()).collect();
            if coeffs[0].is_zero() {
                coeffs[0] = rng.nonzero_rat();
            }
            if coeffs[r_deg].is_zero() {
                coeffs[r_deg] = rng.nonzero_rat();
            }
            let r = crate::exactalg::Poly::new(coeffs);
            if !r.eval(alpha).is_zero() {
                break r;
            }
        };
        // h_w(z) = z^a_in (z - alpha)^kappa r(z)
        let shifted_root = crate::exactalg::Poly::new(vec![alpha.neg(), Rat::from_int(1)]);
        let h = shifted_root.pow(kappa as u32).mul(&r).shift_up(a_in as usize);
        for (jz, c) in h.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let j = jz as i64;
            poly = poly.add(&LaurentPoly::monomial(c.clone(), w + k * j, j));
        }
    }

    // the construction must reproduce the input polygon exactly
    let got = NewtonPolygon::from_support(&poly)?;
    if got != *hull_in {
        return Err(AlgError::CheckFailed(format!(
            "structured sample has hull {:?}, wanted {:?}",
            got.vertex_set_int(),
            hull_in.vertex_set_int()
        )));
    }
    Ok(poly)
}
