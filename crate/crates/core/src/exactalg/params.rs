//! Rational function fields in named transcendental parameters.
//!
//! `ParamElem` is a reduced fraction of multivariate polynomials over the
//! rationals. Machine checks that involve symbols like α or λ run over this
//! field; a `ParamElem` built without a ring context (via `Scalar::from_i64`)
//! lives over the empty parameter set and is promoted on first contact with a
//! ring element.

use std::fmt;
use std::sync::Arc;

use super::{MPoly, Poly, Rat, Scalar};
use crate::error::{AlgError, Result};

/// Ordered set of parameter names, e.g. `["alpha", "lambda"]`.
#[derive(Clone, Debug)]
pub struct ParamRing {
    vars: Arc<Vec<String>>,
}

impl ParamRing {
    pub fn new(names: &[&str]) -> Self {
        ParamRing {
            vars: Arc::new(names.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn zero(&self) -> ParamElem {
        ParamElem {
            num: MPoly::zero(&self.vars),
            den: MPoly::one(&self.vars),
        }
    }

    pub fn one(&self) -> ParamElem {
        self.constant(Rat::from_int(1))
    }

    pub fn constant(&self, c: Rat) -> ParamElem {
        ParamElem {
            num: MPoly::constant(&self.vars, c),
            den: MPoly::one(&self.vars),
        }
    }

    pub fn param(&self, name: &str) -> Result<ParamElem> {
        Ok(ParamElem {
            num: MPoly::var(&self.vars, name)?,
            den: MPoly::one(&self.vars),
        })
    }

    /// `c * prod name^exp`.
    pub fn monomial(&self, c: Rat, exps: &[(&str, u32)]) -> ParamElem {
        let mut e = vec![0u32; self.vars.len()];
        for (name, k) in exps {
            let i = self
                .vars
                .iter()
                .position(|v| v == name)
                .unwrap_or_else(|| panic!("unknown parameter {name}"));
            e[i] += k;
        }
        ParamElem {
            num: MPoly::monomial(&self.vars, c, e),
            den: MPoly::one(&self.vars),
        }
    }

    pub fn from_fraction(&self, num: MPoly<Rat>, den: MPoly<Rat>) -> ParamElem {
        ParamElem::new(num, den)
    }
}

/// Recursive multivariate gcd over the rationals (primitive PRS in the first
/// occurring variable). Output is normalized with lex-leading coefficient 1;
/// gcd(p, 0) = normalized p, gcd(0, 0) = 0.
pub fn mpoly_gcd(a: &MPoly<Rat>, b: &MPoly<Rat>) -> MPoly<Rat> {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let vars = a.vars().clone();
    let main = (0..vars.len())
        .find(|&i| a.terms().any(|(e, _)| e[i] > 0) || b.terms().any(|(e, _)| e[i] > 0));
    let Some(main) = main else {
        return MPoly::one(&vars); // both nonzero constants
    };
    let var = vars[main].clone();

    let (ca, pa) = content_and_primitive(a, &var);
    let (cb, pb) = content_and_primitive(b, &var);
    let cont = mpoly_gcd(&ca, &cb);

    let mut big = pa;
    let mut small = pb;
    if big.degree_in(&var).unwrap() < small.degree_in(&var).unwrap() {
        std::mem::swap(&mut big, &mut small);
    }
    loop {
        let r = pseudo_rem(&big, &small, &var);
        if r.is_zero() {
            break;
        }
        big = small;
        small = content_and_primitive(&r, &var).1;
    }
    normalize(&cont.mul(&small))
}

fn normalize(p: &MPoly<Rat>) -> MPoly<Rat> {
    if p.is_zero() {
        return p.clone();
    }
    let lc = p.terms().next_back().unwrap().1.clone();
    p.mul_scalar(&lc.inv().unwrap())
}

fn content_and_primitive(p: &MPoly<Rat>, var: &str) -> (MPoly<Rat>, MPoly<Rat>) {
    let coeffs = p.coeffs_in(var).expect("var in ring");
    let mut content = MPoly::zero(p.vars());
    for c in &coeffs {
        content = mpoly_gcd(&content, c);
        if let Some(v) = content.constant_value() {
            if v.is_one() {
                break;
            }
        }
    }
    let prim = p.exact_div(&content).expect("content divides");
    // Rational content is a unit; stripping it keeps PRS coefficients
    // integer-primitive instead of letting numerator sizes compound.
    let rc = prim.rational_content();
    (content, prim.mul_scalar(&rc.inv().unwrap()))
}

fn pseudo_rem(a: &MPoly<Rat>, b: &MPoly<Rat>, var: &str) -> MPoly<Rat> {
    let db = b.degree_in(var).unwrap().unwrap();
    let lc_b = b.coeff_in(var, db).unwrap();
    let xv = MPoly::var(a.vars(), var).unwrap();
    let mut r = a.clone();
    loop {
        let Some(dr) = r.degree_in(var).unwrap() else {
            return r;
        };
        if dr < db {
            return r;
        }
        let lc_r = r.coeff_in(var, dr).unwrap();
        r = r
            .mul(&lc_b)
            .sub(&lc_r.mul(b).mul(&xv.pow(dr - db)));
    }
}

/// A reduced fraction of parameter polynomials.
#[derive(Clone, Debug)]
pub struct ParamElem {
    num: MPoly<Rat>,
    den: MPoly<Rat>,
}

impl ParamElem {
    pub fn new(num: MPoly<Rat>, den: MPoly<Rat>) -> Self {
        assert!(!den.is_zero(), "zero denominator as a polynomial");
        let mut e = ParamElem { num, den };
        e.reduce();
        e
    }

    pub fn num(&self) -> &MPoly<Rat> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<Rat> {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.constant_value().is_some() && self.den.constant_value().is_some()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        let n = self.num.constant_value()?;
        let d = self.den.constant_value()?;
        Some(n.div(&d))
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MPoly::one(self.den.vars());
            return;
        }
        if self.den.constant_value().is_none() {
            let g = mpoly_gcd(&self.num, &self.den);
            if g.constant_value().is_none() || !g.constant_value().unwrap().is_one() {
                self.num = self.num.exact_div(&g).expect("gcd divides num");
                self.den = self.den.exact_div(&g).expect("gcd divides den");
            }
        }
        // normalize: lex-leading coefficient of den = 1
        let lc = self.den.terms().next_back().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            self.num = self.num.mul_scalar(&inv);
            self.den = self.den.mul_scalar(&inv);
        }
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.num.vars() == b.num.vars() {
            return (a.clone(), b.clone());
        }
        let promote = |x: &Self, vars: &Arc<Vec<String>>| -> Self {
            let n = x
                .num
                .constant_value()
                .expect("cannot mix elements of different parameter rings");
            let d = x.den.constant_value().unwrap();
            ParamElem {
                num: MPoly::constant(vars, n),
                den: MPoly::constant(vars, d),
            }
        };
        if a.num.vars().is_empty() {
            (promote(a, b.num.vars()), b.clone())
        } else if b.num.vars().is_empty() {
            (a.clone(), promote(b, a.num.vars()))
        } else {
            panic!("{}", AlgError::VarMismatch)
        }
    }
}

impl PartialEq for ParamElem {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = ParamElem::unify(self, other);
        // both reduced and den-normalized, so componentwise equality is exact
        a.num == b.num && a.den == b.den
    }
}

impl Scalar for ParamElem {
    fn zero() -> Self {
        let vars: Arc<Vec<String>> = Arc::new(vec![]);
        ParamElem {
            num: MPoly::zero(&vars),
            den: MPoly::one(&vars),
        }
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn from_i64(n: i64) -> Self {
        let vars: Arc<Vec<String>> = Arc::new(vec![]);
        ParamElem {
            num: MPoly::constant(&vars, Rat::from_int(n)),
            den: MPoly::one(&vars),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        let (a, b) = ParamElem::unify(self, rhs);
        ParamElem::new(
            a.num.mul(&b.den).add(&b.num.mul(&a.den)),
            a.den.mul(&b.den),
        )
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let (a, b) = ParamElem::unify(self, rhs);
        if a.is_zero() || b.is_zero() {
            return ParamElem {
                num: MPoly::zero(a.num.vars()),
                den: MPoly::one(a.num.vars()),
            };
        }
        // cross-cancel before multiplying to limit growth
        let g1 = mpoly_gcd(&a.num, &b.den);
        let g2 = mpoly_gcd(&b.num, &a.den);
        let na = a.num.exact_div(&g1).unwrap();
        let db = b.den.exact_div(&g1).unwrap();
        let nb = b.num.exact_div(&g2).unwrap();
        let da = a.den.exact_div(&g2).unwrap();
        ParamElem::new(na.mul(&nb), da.mul(&db))
    }

    fn neg(&self) -> Self {
        ParamElem {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(ParamElem::new(self.den.clone(), self.num.clone()))
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        // num/den reduced: it is a square in the fraction field iff num*den is
        // a square polynomial, and then sqrt = sqrt(num*den)/den.
        let w = self.num.mul(&self.den).sqrt()?;
        let out = ParamElem::new(w, self.den.clone());
        debug_assert!(out.mul(&out) == *self);
        Some(out)
    }

    /// Gcd over Q(params)[y] through a cleared-denominator bivariate gcd, to
    /// avoid the intermediate fraction blow-up of monic Euclid.
    fn poly_gcd_override(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        if a.is_zero() || b.is_zero() || (a.is_constant() && b.is_constant()) {
            return None; // trivial cases: Euclid terminates immediately
        }
        // pick a common parameter ring
        let vars = a
            .coeffs()
            .iter()
            .chain(b.coeffs())
            .map(|c| c.num.vars())
            .find(|v| !v.is_empty())?
            .clone();
        let aux = "#y";
        let mut ext: Vec<String> = vec![aux.to_string()];
        ext.extend(vars.iter().cloned());
        let ext = Arc::new(ext);
        let clear = |p: &Poly<ParamElem>| -> MPoly<Rat> {
            let mut den = MPoly::one(&vars);
            for c in p.coeffs() {
                let (c, _) = ParamElem::unify(c, &ParamElem::new(MPoly::zero(&vars), MPoly::one(&vars)));
                let g = mpoly_gcd(&den, &c.den);
                den = den.mul(&c.den.exact_div(&g).unwrap());
            }
            let mut out = MPoly::zero(&ext);
            for (k, c) in p.coeffs().iter().enumerate() {
                let (c, _) = ParamElem::unify(c, &ParamElem::new(MPoly::zero(&vars), MPoly::one(&vars)));
                let scaled = c.num.mul(&den.exact_div(&c.den).unwrap());
                for (e, q) in scaled.terms() {
                    let mut e2 = vec![k as u32];
                    e2.extend(e.iter().copied());
                    out = out.add(&MPoly::monomial(&ext, q.clone(), e2));
                }
            }
            out
        };
        let ga = clear(a);
        let gb = clear(b);
        let g = mpoly_gcd(&ga, &gb);
        // back to Poly<ParamElem>, monic
        let deg = g.degree_in(aux).unwrap().unwrap_or(0);
        let mut coeffs = Vec::with_capacity(deg as usize + 1);
        for k in 0..=deg {
            let ck = g.coeff_in(aux, k).unwrap();
            let mut num = MPoly::zero(&vars);
            for (e, q) in ck.terms() {
                num = num.add(&MPoly::monomial(&vars, q.clone(), e[1..].to_vec()));
            }
            coeffs.push(ParamElem::new(num, MPoly::one(&vars)));
        }
        Some(Poly::new(coeffs).monic())
    }
}

impl fmt::Display for ParamElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().is_some_and(|c| c.is_one()) {
            let s = self.num.to_text();
            if self.num.num_terms() > 1 {
                write!(f, "({s})")
            } else {
                write!(f, "{s}")
            }
        } else {
            write!(f, "({})/({})", self.num.to_text(), self.den.to_text())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> ParamRing {
        ParamRing::new(&["alpha", "lambda"])
    }

    #[test]
    fn fraction_reduction() {
        let r = ring();
        let a = r.param("alpha").unwrap();
        // (alpha^2 - 1)/(alpha + 1) = alpha - 1
        let num = a.mul(&a).sub(&r.one());
        let den = a.add(&r.one());
        let q = num.mul(&den.inv().unwrap());
        assert_eq!(q, a.sub(&r.one()));
    }

    #[test]
    fn field_laws() {
        let r = ring();
        let a = r.param("alpha").unwrap();
        let l = r.param("lambda").unwrap();
        let x = a.add(&l.mul(&l)).add(&r.constant(Rat::from_frac(2, 3)));
        let y = a.mul(&l).sub(&r.one());
        assert_eq!(x.mul(&y), y.mul(&x));
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert_eq!(x.add(&y).mul(&x), x.mul(&x).add(&y.mul(&x)));
    }

    #[test]
    fn sqrt_decides() {
        let r = ring();
        let a = r.param("alpha").unwrap();
        let l = r.param("lambda").unwrap();
        let sq = a.mul(&a).mul(&l.inv().unwrap().mul(&l.inv().unwrap()));
        let s = sq.sqrt().unwrap();
        assert_eq!(s.mul(&s), sq);
        assert!(a.sqrt().is_none());
        assert!(a.mul(&a).mul(&a).sqrt().is_none());
    }

    #[test]
    fn promotion_of_bare_constants() {
        let r = ring();
        let a = r.param("alpha").unwrap();
        let two = ParamElem::from_i64(2);
        assert_eq!(a.mul(&two), a.add(&a));
        assert_eq!(two.add(&ParamElem::from_i64(3)), ParamElem::from_i64(5));
    }

    #[test]
    fn gcd_multivariate() {
        let vars = Arc::new(vec!["a".to_string(), "b".to_string()]);
        let a = MPoly::var(&vars, "a").unwrap();
        let b = MPoly::var(&vars, "b").unwrap();
        let f = a.add(&b); // a + b
        let p = f.mul(&a.sub(&b));
        let q = f.mul(&f).mul(&b);
        let g = mpoly_gcd(&p, &q);
        assert_eq!(g, f);
    }
}
