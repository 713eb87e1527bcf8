//! Dense univariate polynomials over an exact field.
//!
//! Coefficients are stored ascending by degree with a nonzero leading
//! coefficient (empty vector = zero polynomial). `UniPoly` is the rational
//! instantiation used for the y-polynomials of the casebook; the same type
//! over [`super::ParamElem`] carries transcendental parameters.

use std::fmt;

use super::{Rat, Scalar};
use crate::error::{AlgError, Result};

pub type UniPoly = Poly<Rat>;

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<T>,
}

/// Multiplicity of a factor; the multiplicity of anything in 0 is infinite.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mult {
    Finite(u32),
    Infinite,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * y^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn var() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order at y = 0 (index of the lowest nonzero coefficient); `None` for zero.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for k in 0..n {
            v.push(self.coeff(k).add(&rhs.coeff(k)));
        }
        Poly::new(v)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v)
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiply by `y^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c.mul(&T::from_i64(k as i64 + 1)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Euclidean division; panics on zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.clone();
        let mut q = vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.leading().unwrap().mul(&lc_inv);
            let k = rd - dd;
            q[k] = q[k].add(&c);
            // r -= c * y^k * d
            let mut v = r.coeffs;
            for (j, b) in d.coeffs.iter().enumerate() {
                v[k + j] = v[k + j].sub(&c.mul(b));
            }
            r = Poly::new(v);
        }
        (Poly::new(q), r)
    }

    /// Exact quotient, `None` when the division leaves a remainder.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.mul_scalar(&lc.inv().unwrap()),
        }
    }

    /// Monic gcd; gcd(p, 0) = monic(p), gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        if let Some(g) = T::poly_gcd_override(self, other) {
            return g;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// True iff gcd(p, p') is constant. Errors on the zero polynomial.
    pub fn is_separable(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(AlgError::ZeroInput("is_separable"));
        }
        Ok(self.gcd(&self.derivative()).is_constant())
    }

    /// Largest e with `factor^e | self`; infinite for the zero polynomial.
    pub fn multiplicity(&self, factor: &Self) -> Mult {
        assert!(
            factor.degree().is_some_and(|d| d >= 1),
            "multiplicity: factor must be nonconstant"
        );
        if self.is_zero() {
            return Mult::Infinite;
        }
        let mut e = 0u32;
        let mut p = self.clone();
        while let Some(q) = p.exact_div(factor) {
            e += 1;
            p = q;
        }
        Mult::Finite(e)
    }

    /// Yun squarefree decomposition: returns pairwise-coprime squarefree monic
    /// factors with multiplicities, and the leading unit, so that
    /// `self = unit * prod f_i^{m_i}`.
    pub fn squarefree_decomposition(&self) -> (T, Vec<(Self, u32)>) {
        if self.is_zero() {
            return (T::zero(), vec![]);
        }
        let unit = self.leading().unwrap().clone();
        let f = self.monic();
        if f.is_constant() {
            return (unit, vec![]);
        }
        let fp = f.derivative();
        let g = f.gcd(&fp);
        if g.is_constant() {
            return (unit, vec![(f, 1)]);
        }
        let mut out = vec![];
        let mut w = f.exact_div(&g).unwrap();
        let y = fp.exact_div(&g).unwrap();
        let mut z = y.sub(&w.derivative());
        let mut i = 1u32;
        while w.degree().is_some_and(|d| d > 0) {
            let a = w.gcd(&z);
            if a.degree().is_some_and(|d| d > 0) {
                out.push((a.clone(), i));
            }
            w = w.exact_div(&a).unwrap();
            let yy = z.exact_div(&a).unwrap();
            z = yy.sub(&w.derivative());
            i += 1;
        }
        (unit, out)
    }

    /// Exact square root: `Some(s)` with `s^2 = self` when it exists over the
    /// coefficient field. Decided by squarefree decomposition (every
    /// multiplicity even) plus a scalar square-root check on the unit.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (unit, factors) = self.squarefree_decomposition();
        let mut root = Poly::one();
        for (f, m) in &factors {
            if m % 2 != 0 {
                return None;
            }
            root = root.mul(&f.pow(m / 2));
        }
        let s = unit.sqrt()?;
        let cand = root.mul_scalar(&s);
        debug_assert!(cand.mul(&cand) == *self);
        Some(cand)
    }

    /// Canonical text form in descending powers, e.g. `3/2*y^4 - y + 1`.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit_mag = mag == "1";
            match (k, unit_mag) {
                (0, _) => out.push_str(&mag),
                (1, true) => out.push_str(var),
                (1, false) => {
                    out.push_str(&mag);
                    out.push('*');
                    out.push_str(var);
                }
                (_, true) => out.push_str(&format!("{var}^{k}")),
                (_, false) => out.push_str(&format!("{mag}*{var}^{k}")),
            }
        }
        out
    }
}

impl Poly<Rat> {
    /// Parse the canonical text form produced by [`Poly::to_text`].
    pub fn parse(s: &str, var: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(AlgError::Parse("empty polynomial".into()));
        }
        // Split into signed terms at top level (no parentheses in this form).
        let mut terms: Vec<(bool, String)> = vec![];
        let mut cur = String::new();
        let mut sign = false;
        let mut started = false;
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && i != 0 && started {
                terms.push((sign, cur.trim().to_string()));
                sign = ch == '-';
                cur = String::new();
            } else if ch == '-' && i == 0 {
                sign = true;
            } else {
                if !ch.is_whitespace() {
                    started = true;
                }
                cur.push(ch);
            }
        }
        terms.push((sign, cur.trim().to_string()));

        let mut acc = Poly::zero();
        for (neg, t) in terms {
            if t.is_empty() {
                return Err(AlgError::Parse(format!("dangling sign in {s:?}")));
            }
            let (coef_str, var_part) = match t.find(var) {
                Some(pos) => {
                    let head = t[..pos].trim().trim_end_matches('*').trim();
                    (head.to_string(), Some(t[pos..].to_string()))
                }
                None => (t.clone(), None),
            };
            let mut c = if coef_str.is_empty() {
                Rat::from_int(1)
            } else {
                Rat::parse(&coef_str)?
            };
            if neg {
                c = c.neg();
            }
            let k = match var_part {
                None => 0,
                Some(vp) => {
                    let rest = vp[var.len()..].trim();
                    if rest.is_empty() {
                        1
                    } else {
                        let e = rest
                            .strip_prefix('^')
                            .ok_or_else(|| AlgError::Parse(format!("bad term {t:?}")))?;
                        e.trim()
                            .parse::<usize>()
                            .map_err(|e| AlgError::Parse(format!("bad exponent: {e}")))?
                    }
                }
            };
            acc = acc.add(&Poly::monomial(c, k));
        }
        Ok(acc)
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("y"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> UniPoly {
        Poly::from_i64s(coeffs)
    }

    #[test]
    fn gcd_shared_factor() {
        // gcd(y^2 - 1, y - 1) = y - 1
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.gcd(&b), b);
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let a = p(&[2, 4]);
        assert_eq!(
            a.gcd(&Poly::zero()),
            UniPoly::new(vec![Rat::from_frac(1, 2), Rat::from_int(1)])
        );
        assert_eq!(UniPoly::zero().gcd(&Poly::zero()), Poly::zero());
    }

    #[test]
    fn g_of_f1_is_separable() {
        // g = 35 - 42y + 54y^2 - 81y^3 + 243y^4 has four different roots.
        let g = p(&[35, -42, 54, -81, 243]);
        assert!(g.gcd(&g.derivative()).is_constant());
        assert!(g.is_separable().unwrap());
    }

    #[test]
    fn separability_examples() {
        assert!(p(&[0, 1, 1]).is_separable().unwrap()); // y(y+1)
        assert!(!p(&[1, 2, 1]).is_separable().unwrap()); // (y+1)^2
        assert!(UniPoly::zero().is_separable().is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let y = UniPoly::var();
        let y1 = p(&[1, 1]);
        // y^3 (y+1)
        let q = y.pow(3).mul(&y1);
        assert_eq!(q.multiplicity(&y), Mult::Finite(3));
        assert_eq!(q.multiplicity(&y1), Mult::Finite(1));
        assert_eq!(UniPoly::zero().multiplicity(&y), Mult::Infinite);
        // multiplicity of (y+1) in (y+1)^66 g^3 with (y+1) not dividing g
        let g = p(&[35, -42, 54, -81, 243]);
        let big = y1.pow(66).mul(&g.pow(3));
        assert_eq!(big.multiplicity(&y1), Mult::Finite(66));
    }

    #[test]
    fn multiplicity_is_additive() {
        let mut rng = crate::rng::Rng::new(3);
        let f = p(&[1, 1]);
        for _ in 0..50 {
            let a = UniPoly::new((0..5).map(|_| rng.rat()).collect());
            let b = UniPoly::new((0..5).map(|_| rng.rat()).collect());
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let (Mult::Finite(ma), Mult::Finite(mb)) = (a.multiplicity(&f), b.multiplicity(&f))
            else {
                unreachable!()
            };
            assert_eq!(a.mul(&b).multiplicity(&f), Mult::Finite(ma + mb));
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(p(&[1, 2, 1]).sqrt(), Some(p(&[1, 1])));
        let y8 = UniPoly::var().pow(8);
        assert_eq!(y8.sqrt(), Some(UniPoly::var().pow(4)));
        assert_eq!(p(&[0, 1]).sqrt(), None);
        assert_eq!(p(&[2, 4, 2]).sqrt(), None); // unit 2 is not a rational square
    }

    #[test]
    fn sqrt_roundtrip_random() {
        let mut rng = crate::rng::Rng::new(5);
        for _ in 0..200 {
            let deg = rng.below(11) as usize;
            let s = UniPoly::new((0..=deg).map(|_| rng.rat()).collect());
            let sq = s.mul(&s);
            let r = sq.sqrt().expect("square of a polynomial must have a root");
            assert!(r == s || r == s.neg());
        }
    }

    #[test]
    fn text_form_roundtrip() {
        let q = UniPoly::new(vec![
            Rat::from_int(1),
            Rat::from_int(-1),
            Rat::from_int(0),
            Rat::from_int(0),
            Rat::from_frac(3, 2),
        ]);
        assert_eq!(q.to_text("y"), "3/2*y^4 - y + 1");
        assert_eq!(UniPoly::parse("3/2*y^4 - y + 1", "y").unwrap(), q);
        assert_eq!(UniPoly::parse("0", "y").unwrap(), UniPoly::zero());
    }

    #[test]
    fn divrem_invariant() {
        let mut rng = crate::rng::Rng::new(9);
        for _ in 0..100 {
            let a = UniPoly::new((0..7).map(|_| rng.rat()).collect());
            let b = UniPoly::new((0..4).map(|_| rng.rat()).collect());
            if b.is_zero() {
                continue;
            }
            let (q, r) = a.divrem(&b);
            assert_eq!(q.mul(&b).add(&r), a);
            assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
