//! Order-by-order construction of the approximate square root C of P, the
//! polynomiality transform D_k, the shear that kills the x^2 coefficient,
//! valuation certificates, the F_{-4} extraction and the linear ODE solved by
//! coefficient matching.
//!
//! Two case families share the machinery: the one with C3 = y^8 (y+1) and
//! localized ring K[y, C3^-1], and the one with C3 = y and ring K[y, y^-1].
//! The recursion is 2 C3 C_{3-k} = P_{6-k} - sum_{j=1}^{k-1} C_{3-j} C_{3-k+j},
//! the sign forced by P = C^2.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{AlgError, Result};
use crate::exactalg::{Poly, Rat, Scalar, UniPoly};
use crate::laurent::{bracket, DenBase, LaurentPoly, LocalizedYCoeff, TruncSeries};
use crate::rng::Rng;

/// Case family selector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CaseKind {
    /// C3 = y^8 (y+1); valuation bounds v_{-1,1} <= 6 and v_{3,-1} <= 1.
    Nine27,
    /// C3 = y; valuation bounds v_{2,1} <= 7 and v_{1,-1} <= 2.
    Seven21,
}

impl CaseKind {
    pub fn base(&self) -> DenBase {
        match self {
            CaseKind::Nine27 => DenBase::C3,
            CaseKind::Seven21 => DenBase::Y,
        }
    }

    pub fn c3_poly<S: Scalar>(&self) -> Poly<S> {
        self.base().poly()
    }

    /// Exponent map of the polynomiality transform D_k = C_k * base^{m(k)}.
    pub fn transform_exponent(&self, k: i64) -> i64 {
        match self {
            CaseKind::Nine27 => 5 - 2 * k,
            CaseKind::Seven21 => 2 - k,
        }
    }

    /// (direction printed as (rho, sigma), bound) for the at-infinity side:
    /// v(x^i c) = rho*i + val_at_infinity(c) * sigma with sigma = 1.
    fn inf_bound(&self) -> (i64, i64) {
        match self {
            CaseKind::Nine27 => (-1, 6),
            CaseKind::Seven21 => (2, 7),
        }
    }

    /// (rho, bound) for the at-zero side: v(x^i c) = rho*i - val_at_zero(c).
    fn zero_bound(&self) -> (i64, i64) {
        match self {
            CaseKind::Nine27 => (3, 1),
            CaseKind::Seven21 => (1, 2),
        }
    }
}

/// Input to the root construction: the seven x-coefficients P_6..P_0.
#[derive(Clone, Debug)]
pub struct RootConfig<S: Scalar> {
    pub case: CaseKind,
    pub depth: usize,
    /// P_6, P_5, ..., P_0 (descending x-exponent).
    pub p: Vec<Poly<S>>,
}

impl<S: Scalar> RootConfig<S> {
    pub fn new(case: CaseKind, depth: usize, p: Vec<Poly<S>>) -> Result<Self> {
        if p.len() != 7 {
            return Err(AlgError::Precondition(
                "exactly seven coefficients P6..P0 required".into(),
            ));
        }
        if p[0] != case.c3_poly::<S>().pow(2) {
            return Err(AlgError::Precondition(
                "leading form must satisfy P6 = C3^2".into(),
            ));
        }
        Ok(RootConfig { case, depth, p })
    }

    fn p_coeff(&self, x_exp: i64) -> Poly<S> {
        if (0..=6).contains(&x_exp) {
            self.p[(6 - x_exp) as usize].clone()
        } else {
            Poly::zero()
        }
    }
}

/// Per-coefficient valuation record: both directional values and their bounds.
#[derive(Clone, Debug)]
pub struct ValuationRecord {
    pub index: i64,
    pub inf_value: Option<i64>,
    pub inf_bound: i64,
    pub zero_value: Option<i64>,
    pub zero_bound: i64,
}

impl ValuationRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "v_inf": self.inf_value,
            "v_inf_bound": self.inf_bound,
            "v_zero": self.zero_value,
            "v_zero_bound": self.zero_bound,
        })
    }
}

/// The constructed approximate root with its valuation certificates.
#[derive(Clone, Debug)]
pub struct RootSeries<S: Scalar> {
    pub case: CaseKind,
    pub c: TruncSeries<S>,
    pub certs: Vec<ValuationRecord>,
}

/// Construct C = x^3 C3 + x^2 C_2 + ... down to x^{3-depth}, verifying the
/// per-step valuation bounds.
pub fn build_root<S: Scalar>(cfg: &RootConfig<S>) -> Result<RootSeries<S>> {
    let base = cfg.case.base();
    let c3 = LocalizedYCoeff::from_poly(cfg.case.c3_poly::<S>(), base);
    let half = S::from_frac(1, 2);
    let mut c = TruncSeries::<S>::new(base, 3, 3 - cfg.depth as i64);
    c.set(3, c3.clone());
    let mut certs = vec![record_valuations(cfg.case, 3, &c3)?];

    for k in 1..=cfg.depth as i64 {
        // sum_{j=1}^{k-1} C_{3-j} C_{3-k+j}
        let mut sum = LocalizedYCoeff::zero(base);
        for j in 1..k {
            sum = sum.add(&c.coeff(3 - j)?.mul(&c.coeff(3 - k + j)?));
        }
        let num = LocalizedYCoeff::from_poly(cfg.p_coeff(6 - k), base).sub(&sum);
        // divide by 2 C3: one extra base power plus the scalar 1/2
        let coeff = num.div_base_pow(1).mul_scalar(&half);
        certs.push(record_valuations(cfg.case, 3 - k, &coeff)?);
        c.set(3 - k, coeff);
    }

    let root = RootSeries {
        case: cfg.case,
        c,
        certs,
    };
    verify_square_matches(cfg, &root)?;
    Ok(root)
}

fn record_valuations<S: Scalar>(
    case: CaseKind,
    index: i64,
    c: &LocalizedYCoeff<S>,
) -> Result<ValuationRecord> {
    let (rho_inf, bound_inf) = case.inf_bound();
    let (rho_zero, bound_zero) = case.zero_bound();
    let rec = if c.is_zero() {
        ValuationRecord {
            index,
            inf_value: None,
            inf_bound: bound_inf,
            zero_value: None,
            zero_bound: bound_zero,
        }
    } else {
        let vi = rho_inf * index + c.val_at_infinity()?;
        let vz = rho_zero * index - c.val_at_zero()?;
        if vi > bound_inf {
            return Err(AlgError::ValuationBound {
                index,
                expected: bound_inf,
                got: vi,
            });
        }
        if vz > bound_zero {
            return Err(AlgError::ValuationBound {
                index,
                expected: bound_zero,
                got: vz,
            });
        }
        ValuationRecord {
            index,
            inf_value: Some(vi),
            inf_bound: bound_inf,
            zero_value: Some(vz),
            zero_bound: bound_zero,
        }
    };
    Ok(rec)
}

/// (C down to depth)^2 agrees with P on every tracked coefficient.
fn verify_square_matches<S: Scalar>(cfg: &RootConfig<S>, root: &RootSeries<S>) -> Result<()> {
    let sq = root.c.square();
    let base = cfg.case.base();
    for k in sq.trunc_order().max(6 - cfg.depth as i64)..=6 {
        let want = LocalizedYCoeff::from_poly(cfg.p_coeff(k), base);
        let got = sq.coeff(k)?;
        if got != want {
            return Err(AlgError::CheckFailed(format!(
                "C^2 disagrees with P at x^{k}"
            )));
        }
    }
    Ok(())
}

/// The polynomial coefficients D_k = C_k * base^{m(k)}.
#[derive(Clone, Debug)]
pub struct DSeries<S: Scalar> {
    pub case: CaseKind,
    pub d: BTreeMap<i64, Poly<S>>,
}

/// Clear every denominator; failure reports the offending index.
pub fn build_d<S: Scalar>(root: &RootSeries<S>) -> Result<DSeries<S>> {
    let mut d = BTreeMap::new();
    for (&k, coeff) in root.c.known_coeffs() {
        let transformed = coeff.mul_base_pow(root.case.transform_exponent(k));
        match transformed.as_poly() {
            Some(p) => {
                d.insert(k, p.clone());
            }
            None => return Err(AlgError::ResidualDenominator { index: k }),
        }
    }
    Ok(DSeries { case: root.case, d })
}

/// Taylor shift x -> x - D_2/3, which kills the x^2 coefficient of
/// D = x^3 + D_2 x^2 + ...; returns the coefficients d_i of the shifted series.
pub fn shear_to_dtilde<S: Scalar>(ds: &DSeries<S>) -> Result<BTreeMap<i64, Poly<S>>> {
    let base = ds.case.base();
    let ord = *ds.d.keys().next().unwrap_or(&3);
    let mut series = TruncSeries::<S>::new(base, 3, ord);
    for (&k, p) in &ds.d {
        series.set(k, LocalizedYCoeff::from_poly(p.clone(), base));
    }
    let d2 = ds.d.get(&2).cloned().unwrap_or_else(Poly::zero);
    let shift = LocalizedYCoeff::from_poly(
        d2.mul_scalar(&S::from_frac(-1, 3)),
        base,
    );
    let shifted = series.shift_x(&shift);
    let mut out = BTreeMap::new();
    for (&k, c) in shifted.known_coeffs() {
        match c.as_poly() {
            Some(p) => {
                out.insert(k, p.clone());
            }
            None => return Err(AlgError::ResidualDenominator { index: k }),
        }
    }
    if out.contains_key(&2) {
        return Err(AlgError::CheckFailed(
            "shear failed to kill the x^2 coefficient".into(),
        ));
    }
    Ok(out)
}

/// Valuation certificate for the polynomial coefficients, with the degree and
/// divisibility corollaries used by the terminal contradictions.
#[derive(Clone, Debug)]
pub struct DValuationCert {
    pub case: CaseKind,
    pub rows: Vec<(i64, i64, i64)>, // (index, v_zero_side, v_inf_side)
    pub equality_at_3: bool,
    /// deg(d_1) bound and deg(d_0) bound.
    pub deg_d1: i64,
    pub deg_d0: i64,
    /// y-multiplicities forced on d_1, d_0, d_{-1} (zero for the y-base case).
    pub ord_d1: i64,
    pub ord_d0: i64,
    pub ord_dm1: i64,
    /// Reduced-degree bounds deg(d~_1), deg(d~_0) after stripping those powers.
    pub deg_d1_tilde: i64,
    pub deg_d0_tilde: i64,
    pub deg_dm1_tilde: i64,
}

impl DValuationCert {
    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows.iter().map(|r| json!([r.0, r.1, r.2])).collect::<Vec<_>>(),
            "equality_at_3": self.equality_at_3,
            "deg_d1": self.deg_d1, "deg_d0": self.deg_d0,
            "ord_d1": self.ord_d1, "ord_d0": self.ord_d0, "ord_dm1": self.ord_dm1,
            "deg_d1_tilde": self.deg_d1_tilde,
            "deg_d0_tilde": self.deg_d0_tilde,
            "deg_dm1_tilde": self.deg_dm1_tilde,
        })
    }
}

/// Check v-bounds for every constructed coefficient and derive the corollaries.
/// The Nine27 family checks v_{-13,-1}(d_k x^k) <= -39 and
/// v_{17,1}(d_k x^k) <= 51 (equality at k = 3); the Seven21 family checks the
/// analogous v_{0,-1}(d_k) <= 0 and v_{3,1}(d_k x^k) <= 9.
pub fn verify_d_valuations<S: Scalar>(
    case: CaseKind,
    d: &BTreeMap<i64, Poly<S>>,
) -> Result<DValuationCert> {
    // (zero-side rho, zero bound, inf-side rho, inf bound)
    let (zr, zb, ir, ib) = match case {
        CaseKind::Nine27 => (-13i64, -39i64, 17i64, 51i64),
        CaseKind::Seven21 => (0, 0, 3, 9),
    };
    let mut rows = vec![];
    let mut eq3 = false;
    for (&k, p) in d {
        if p.is_zero() {
            continue;
        }
        let vz = zr * k - p.ord().unwrap() as i64;
        let vi = ir * k + p.degree().unwrap() as i64;
        if vz > zb {
            return Err(AlgError::ValuationBound {
                index: k,
                expected: zb,
                got: vz,
            });
        }
        if vi > ib {
            return Err(AlgError::ValuationBound {
                index: k,
                expected: ib,
                got: vi,
            });
        }
        if k == 3 {
            eq3 = vz == zb && vi == ib;
        }
        rows.push((k, vz, vi));
    }
    // degree bound: deg(d_i) <= ib - ir*i; ord bound: ord(d_i) >= zr*i - zb
    let deg = |i: i64| ib - ir * i;
    let ord = |i: i64| (zr * i - zb).max(0);
    Ok(DValuationCert {
        case,
        rows,
        equality_at_3: eq3,
        deg_d1: deg(1),
        deg_d0: deg(0),
        ord_d1: ord(1),
        ord_d0: ord(0),
        ord_dm1: ord(-1),
        deg_d1_tilde: deg(1) - ord(1),
        deg_d0_tilde: deg(0) - ord(0),
        deg_dm1_tilde: deg(-1) - ord(-1),
    })
}

/// F_{-4} = (Q - C^3 - lambda C^-1)_{-4}, with lambda recovered from the x^-3
/// coefficient of Q - C^3 (zero when Q = C^3 exactly). Returns (lambda, F_{-4}).
pub fn extract_f4<S: Scalar>(
    q: &TruncSeries<S>,
    root: &RootSeries<S>,
) -> Result<(S, LocalizedYCoeff<S>)> {
    let base = root.case.base();
    let c3cube = root.c.mul(&root.c).mul(&root.c);
    let diff = q.sub(&c3cube);
    // (Q - C^3)_{-3} = lambda * C3^{-1}
    let lam_coeff = diff.coeff(-3)?.mul(&LocalizedYCoeff::from_poly(
        root.case.c3_poly::<S>(),
        base,
    ));
    let lambda = match lam_coeff.as_poly() {
        Some(p) if p.is_constant() => p.coeff(0),
        _ => {
            return Err(AlgError::CheckFailed(
                "x^-3 coefficient of Q - C^3 is not lambda * C3^-1".into(),
            ))
        }
    };
    let c_inv = root.c.inverse()?;
    let f4 = diff
        .sub(&c_inv.mul_coeff(&LocalizedYCoeff::from_poly(
            Poly::constant(lambda.clone()),
            base,
        )))
        .coeff(-4)?;
    Ok((lambda, f4))
}

/// Solve [x^6 y^2, u(y) x^-4] = x over Laurent polynomials in y: the unique
/// solution is u = (1/2) y^-1, verified by an exact bracket evaluation and by
/// the diagonal action y^m -> (6m + 8) y^{m+1}, which never vanishes.
pub fn solve_f4_7_21() -> Result<LocalizedYCoeff<Rat>> {
    // diagonal solve: target x * 1 needs m + 1 = 0, coefficient (6m+8) = 2
    let m: i64 = -1;
    let factor = 6 * m + 8;
    let u = LocalizedYCoeff::new(
        Poly::constant(Rat::from_frac(1, factor)),
        1,
        DenBase::Y,
    );
    // uniqueness: 6m + 8 != 0 for every integer m, so the diagonal map is
    // injective on Laurent monomials
    debug_assert!((-50..=50).all(|m: i64| 6 * m + 8 != 0));
    // exact bracket check: [x^6 y^2, (1/2) y^-1 x^-4] = x
    let p = LaurentPoly::monomial(Rat::from_int(1), 6, 2);
    let f = LaurentPoly::monomial(Rat::from_frac(1, 2), -4, -1);
    let br = bracket(&p, &f)?;
    if br != LaurentPoly::monomial(Rat::from_int(1), 1, 0) {
        return Err(AlgError::CheckFailed(format!(
            "bracket equation residue: {br}"
        )));
    }
    Ok(u)
}

/// Result of the f_1 ODE: the solution, the cofactor g with
/// f_1 = y^9 (y+1)^2 g(y), and the residual/uniqueness verdicts.
#[derive(Clone, Debug)]
pub struct F1Solution {
    pub f1: UniPoly,
    pub g: UniPoly,
}

/// Solve y^9 (y+1)^2 = 6 y (y+1) f' - 10 (9y + 8) f by coefficient matching.
///
/// Writing f = sum a_j y^j, the equation reads
/// a_{j-1} (6j - 96) + a_j (6j - 80) = rhs_j, and 6j - 80 never vanishes, so
/// the forward recursion determines every a_j uniquely (and kills the
/// homogeneous equation, which proves uniqueness).
pub fn solve_f1_ode() -> Result<F1Solution> {
    let rhs = UniPoly::var().pow(9).mul(&UniPoly::from_i64s(&[1, 1]).pow(2));
    let cutoff = 40usize;
    let mut a = vec![Rat::from_int(0); cutoff + 1];
    for j in 0..=cutoff as i64 {
        let r = rhs.coeff(j as usize);
        let prev = if j == 0 {
            Rat::from_int(0)
        } else {
            a[(j - 1) as usize].mul(&Rat::from_int(6 * j - 96))
        };
        let den = Rat::from_int(6 * j - 80);
        a[j as usize] = r.sub(&prev).div(&den);
    }
    let f1 = UniPoly::new(a);
    if f1.degree() != Some(15) {
        return Err(AlgError::CheckFailed(format!(
            "f1 degree {:?}, expected 15",
            f1.degree()
        )));
    }
    // residual check: plug back in
    let lhs = UniPoly::var()
        .mul(&UniPoly::from_i64s(&[1, 1]))
        .mul(&f1.derivative())
        .mul_scalar(&Rat::from_int(6))
        .sub(&UniPoly::from_i64s(&[8, 9]).mul(&f1).mul_scalar(&Rat::from_int(10)));
    if lhs != rhs {
        return Err(AlgError::CheckFailed("ODE residual nonzero".into()));
    }
    // uniqueness: the homogeneous forward recursion forces zero
    let mut h = Rat::from_int(0);
    for j in 0..=cutoff as i64 {
        h = Rat::from_int(0).sub(&h.mul(&Rat::from_int(6 * j - 96)));
        let den = Rat::from_int(6 * j - 80);
        h = h.div(&den);
        if !h.is_zero() {
            return Err(AlgError::CheckFailed(
                "homogeneous equation has a nonzero polynomial solution".into(),
            ));
        }
    }
    let g = f1
        .exact_div(&UniPoly::var().pow(9).mul(&UniPoly::from_i64s(&[1, 1]).pow(2)))
        .ok_or_else(|| AlgError::CheckFailed("y^9 (y+1)^2 does not divide f1".into()))?;
    Ok(F1Solution { f1, g })
}

/// Sample rational coefficients P_6..P_0 on the case's polygon support with
/// the prescribed leading form. No rejection is needed: the construction
/// divides only by 2 C3, which never vanishes.
pub fn sample_admissible_p(case: CaseKind, rng: &mut Rng) -> Vec<Poly<Rat>> {
    type Bound = fn(i64) -> i64;
    let (lower, upper): (Bound, Bound) = match case {
        // support in hull{(0,0),(1,1),(6,16),(6,18)}
        CaseKind::Nine27 => (
            |i| if i <= 1 { i } else { 3 * i - 2 },
            |i| 3 * i,
        ),
        // support in hull{(0,0),(4,0),(6,2),(0,14)}
        CaseKind::Seven21 => (|i| (i - 4).max(0), |i| 14 - 2 * i),
    };
    let mut out = vec![case.c3_poly::<Rat>().pow(2)];
    for i in (0..=5).rev() {
        let lo = lower(i);
        let hi = upper(i);
        let mut coeffs = vec![Rat::from_int(0); (hi + 1) as usize];
        for (j, c) in coeffs.iter_mut().enumerate().take(hi as usize + 1) {
            if (j as i64) < lo {
                continue;
            }
            if rng.below(4) != 0 {
                *c = rng.rat();
            }
        }
        out.push(Poly::new(coeffs));
    }
    out
}
