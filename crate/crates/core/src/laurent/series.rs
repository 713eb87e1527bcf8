//! Truncated series in descending powers of x whose coefficients live in a
//! localized y-ring K[y, base^-1], base either y or C3 = y^8 (y+1).
//!
//! Truncation bookkeeping is conservative: every operation records the weakest
//! guaranteed order, and consumers must check the order is deep enough before
//! reading a coefficient.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{AlgError, Result};
use crate::exactalg::{Poly, Scalar};

/// Denominator base of the localized coefficient ring.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DenBase {
    /// base = y
    Y,
    /// base = y^8 (y+1)
    C3,
}

impl DenBase {
    pub fn poly<T: Scalar>(&self) -> Poly<T> {
        match self {
            DenBase::Y => Poly::var(),
            DenBase::C3 => {
                // y^8 (y+1) = y^9 + y^8
                Poly::var().pow(8).mul(&Poly::var().add(&Poly::one()))
            }
        }
    }

    pub fn ord(&self) -> i64 {
        match self {
            DenBase::Y => 1,
            DenBase::C3 => 8,
        }
    }

    pub fn deg(&self) -> i64 {
        match self {
            DenBase::Y => 1,
            DenBase::C3 => 9,
        }
    }
}

/// `num / base^pow`, reduced so that base does not divide num unless pow = 0.
#[derive(Clone, PartialEq, Debug)]
pub struct LocalizedYCoeff<T: Scalar> {
    num: Poly<T>,
    pow: u32,
    base: DenBase,
}

impl<T: Scalar> LocalizedYCoeff<T> {
    pub fn new(num: Poly<T>, pow: u32, base: DenBase) -> Self {
        let mut c = LocalizedYCoeff { num, pow, base };
        c.reduce();
        c
    }

    pub fn zero(base: DenBase) -> Self {
        LocalizedYCoeff {
            num: Poly::zero(),
            pow: 0,
            base,
        }
    }

    pub fn from_poly(p: Poly<T>, base: DenBase) -> Self {
        LocalizedYCoeff {
            num: p,
            pow: 0,
            base,
        }
    }

    pub fn one(base: DenBase) -> Self {
        Self::from_poly(Poly::one(), base)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.pow = 0;
            return;
        }
        let b = self.base.poly::<T>();
        while self.pow > 0 {
            match self.num.exact_div(&b) {
                Some(q) => {
                    self.num = q;
                    self.pow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn pow(&self) -> u32 {
        self.pow
    }

    pub fn base(&self) -> DenBase {
        self.base
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn check_base(&self, rhs: &Self) {
        assert!(self.base == rhs.base, "mixed localization bases");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_base(rhs);
        let b = self.base.poly::<T>();
        let p = self.pow.max(rhs.pow);
        let a = self.num.mul(&b.pow(p - self.pow));
        let c = rhs.num.mul(&b.pow(p - rhs.pow));
        LocalizedYCoeff::new(a.add(&c), p, self.base)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LocalizedYCoeff {
            num: self.num.neg(),
            pow: self.pow,
            base: self.base,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_base(rhs);
        LocalizedYCoeff::new(self.num.mul(&rhs.num), self.pow + rhs.pow, self.base)
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        LocalizedYCoeff::new(self.num.mul_scalar(c), self.pow, self.base)
    }

    /// Divide by base^e (e >= 0).
    pub fn div_base_pow(&self, e: u32) -> Self {
        LocalizedYCoeff::new(self.num.clone(), self.pow + e, self.base)
    }

    /// Multiply by base^e for signed e.
    pub fn mul_base_pow(&self, e: i64) -> Self {
        if e >= 0 {
            LocalizedYCoeff::new(
                self.num.mul(&self.base.poly::<T>().pow(e as u32)),
                self.pow,
                self.base,
            )
        } else {
            self.div_base_pow((-e) as u32)
        }
    }

    /// The underlying polynomial when the denominator is fully cleared.
    pub fn as_poly(&self) -> Option<&Poly<T>> {
        (self.pow == 0).then_some(&self.num)
    }

    /// Multiplicative inverse inside K[y, base^-1]; requires the numerator to
    /// divide a power of the base.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        // factor num = c * y^a * (y+1)^b, rejecting anything else
        let y = Poly::<T>::var();
        let y1 = Poly::<T>::var().add(&Poly::one());
        let mut rest = self.num.clone();
        let mut a = 0u32;
        while let Some(q) = rest.exact_div(&y) {
            rest = q;
            a += 1;
        }
        let mut b = 0u32;
        if self.base == DenBase::C3 {
            while let Some(q) = rest.exact_div(&y1) {
                rest = q;
                b += 1;
            }
        }
        let c = match rest.degree() {
            Some(0) => rest.coeff(0),
            _ => {
                return Err(AlgError::Precondition(
                    "coefficient not invertible in the localized ring".into(),
                ))
            }
        };
        let c_inv = c.inv().ok_or(AlgError::DivisionByZero)?;
        // inverse = base^pow / (c y^a (y+1)^b)
        let n = match self.base {
            DenBase::Y => a,
            DenBase::C3 => b.max(a.div_ceil(8)),
        };
        let num = match self.base {
            DenBase::Y => Poly::monomial(c_inv, (n - a) as usize),
            DenBase::C3 => Poly::monomial(c_inv, (8 * n - a) as usize).mul(&y1.pow(n - b)),
        };
        Ok(LocalizedYCoeff::new(
            num.mul(&self.base.poly::<T>().pow(self.pow)),
            n,
            self.base,
        ))
    }

    /// ord_y(num) - pow * ord_y(base): the valuation at y = 0 seen in K((y)).
    pub fn val_at_zero(&self) -> Result<i64> {
        let o = self.num.ord().ok_or(AlgError::ZeroInput("val_at_zero"))?;
        Ok(o as i64 - self.pow as i64 * self.base.ord())
    }

    /// deg(num) - pow * deg(base): the valuation at infinity seen in K((y^-1)).
    pub fn val_at_infinity(&self) -> Result<i64> {
        let d = self
            .num
            .degree()
            .ok_or(AlgError::ZeroInput("val_at_infinity"))?;
        Ok(d as i64 - self.pow as i64 * self.base.deg())
    }
}

impl<T: Scalar> fmt::Display for LocalizedYCoeff<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pow == 0 {
            write!(f, "{}", self.num.to_text("y"))
        } else {
            let b = match self.base {
                DenBase::Y => "y",
                DenBase::C3 => "(y^8*(y+1))",
            };
            write!(f, "({}) / {}^{}", self.num.to_text("y"), b, self.pow)
        }
    }
}

/// Series sum_{ord <= k <= top} c_k x^k with coefficients unknown below x^ord.
#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<T: Scalar> {
    coeffs: BTreeMap<i64, LocalizedYCoeff<T>>,
    top: i64,
    ord: i64,
    base: DenBase,
}

impl<T: Scalar> TruncSeries<T> {
    pub fn new(base: DenBase, top: i64, ord: i64) -> Self {
        assert!(ord <= top + 1);
        TruncSeries {
            coeffs: BTreeMap::new(),
            top,
            ord,
            base,
        }
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn trunc_order(&self) -> i64 {
        self.ord
    }

    pub fn base(&self) -> DenBase {
        self.base
    }

    pub fn set(&mut self, k: i64, c: LocalizedYCoeff<T>) {
        assert!(k >= self.ord && k <= self.top, "exponent outside tracked range");
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    /// Known coefficient of x^k. Errors when k is below the truncation order.
    pub fn coeff(&self, k: i64) -> Result<LocalizedYCoeff<T>> {
        if k < self.ord {
            return Err(AlgError::Precondition(format!(
                "coefficient x^{k} below truncation order x^{}",
                self.ord
            )));
        }
        Ok(self
            .coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| LocalizedYCoeff::zero(self.base)))
    }

    pub fn known_coeffs(&self) -> impl Iterator<Item = (&i64, &LocalizedYCoeff<T>)> {
        self.coeffs.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert!(self.base == rhs.base);
        let mut out = TruncSeries::new(
            self.base,
            self.top.max(rhs.top),
            self.ord.max(rhs.ord),
        );
        for k in out.ord..=out.top {
            let a = if k >= self.ord { self.coeff(k).unwrap() } else { LocalizedYCoeff::zero(self.base) };
            let b = if k >= rhs.ord { rhs.coeff(k).unwrap() } else { LocalizedYCoeff::zero(self.base) };
            out.set(k, a.add(&b));
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, c.neg())).collect(),
            top: self.top,
            ord: self.ord,
            base: self.base,
        }
    }

    /// Product, known down to max(ord_a + top_b, ord_b + top_a).
    pub fn mul(&self, rhs: &Self) -> Self {
        assert!(self.base == rhs.base);
        let top = self.top + rhs.top;
        let ord = (self.ord + rhs.top).max(rhs.ord + self.top);
        let mut out = TruncSeries::new(self.base, top, ord);
        for (&ka, ca) in &self.coeffs {
            for (&kb, cb) in &rhs.coeffs {
                let k = ka + kb;
                if k < ord {
                    continue;
                }
                let cur = out.coeff(k).unwrap();
                out.set(k, cur.add(&ca.mul(cb)));
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &LocalizedYCoeff<T>) -> Self {
        let mut out = TruncSeries::new(self.base, self.top, self.ord);
        for (&k, a) in &self.coeffs {
            out.set(k, a.mul(c));
        }
        out
    }

    pub fn mul_x_pow(&self, e: i64) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k + e, c.clone())).collect(),
            top: self.top + e,
            ord: self.ord + e,
            base: self.base,
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Inverse of a series whose top coefficient is invertible in the
    /// localized ring, known down to the same depth budget as the input:
    /// the result is tracked on [ord - 2*top, -top].
    pub fn inverse(&self) -> Result<Self> {
        let lead = self.coeff(self.top)?;
        if lead.is_zero() {
            return Err(AlgError::ZeroInput("series inverse"));
        }
        let lead_inv = lead.inv()?;
        // self = lead x^top (1 + u), u known down to ord - top (< 0 terms)
        let u = {
            let mut u = self.mul_coeff(&lead_inv).mul_x_pow(-self.top);
            u.set(0, LocalizedYCoeff::zero(self.base));
            u
        };
        // (1+u)^-1 = sum (-u)^m truncated at the tracked order of u
        let depth = -(u.ord); // u lives on [u.ord, -1]
        let mut acc = TruncSeries::new(self.base, 0, u.ord);
        acc.set(0, LocalizedYCoeff::one(self.base));
        let mut power = TruncSeries::new(self.base, 0, u.ord);
        power.set(0, LocalizedYCoeff::one(self.base));
        let neg_u = u.neg();
        for _ in 0..depth.max(0) {
            power = power.mul(&neg_u).truncate_to(u.ord);
            acc = acc.add(&power);
        }
        Ok(acc.mul_coeff(&lead_inv).mul_x_pow(-self.top))
    }

    /// Forget everything below x^new_ord (new_ord >= ord).
    pub fn truncate_to(&self, new_ord: i64) -> Self {
        assert!(new_ord >= self.ord);
        TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| k >= new_ord)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            top: self.top.max(new_ord),
            ord: new_ord,
            base: self.base,
        }
    }

    /// Substitute x -> x + e for a coefficient-ring element e (Taylor shift),
    /// truncated at the tracked order.
    pub fn shift_x(&self, e: &LocalizedYCoeff<T>) -> Self {
        let mut out = TruncSeries::new(self.base, self.top, self.ord);
        for (&k, c) in &self.coeffs {
            // (x + e)^k = sum_t binom(k, t) e^t x^{k-t}, t <= k - ord
            let mut binom = LocalizedYCoeff::one(self.base);
            let mut e_pow = LocalizedYCoeff::one(self.base);
            let t_max = k - self.ord;
            for t in 0..=t_max {
                if t > 0 {
                    // binom(k, t) = binom(k, t-1) * (k - t + 1) / t
                    let factor = T::from_i64(k - t + 1).div(&T::from_i64(t));
                    binom = binom.mul_scalar(&factor);
                    e_pow = e_pow.mul(e);
                }
                if k >= 0 && t > k {
                    break; // nonnegative powers are exact polynomials in x
                }
                let contrib = c.mul(&binom).mul(&e_pow);
                let idx = k - t;
                if idx < self.ord {
                    break;
                }
                let cur = out.coeff(idx).unwrap();
                out.set(idx, cur.add(&contrib));
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Display for TruncSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})*x^{k}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.ord - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{ParamRing, Rat};

    #[test]
    fn val_examples() {
        // C3^-1: val_at_zero = -8 so v_{3,-1}(C3^-1) = 8,
        //        val_at_infinity = -9 so v_{-1,1}(C3^-1) = -9.
        let c: LocalizedYCoeff<Rat> =
            LocalizedYCoeff::new(Poly::one(), 1, DenBase::C3);
        assert_eq!(c.val_at_zero().unwrap(), -8);
        assert_eq!(c.val_at_infinity().unwrap(), -9);
        // y^5 -> (5, 5)
        let y5 = LocalizedYCoeff::from_poly(Poly::<Rat>::var().pow(5), DenBase::C3);
        assert_eq!(y5.val_at_zero().unwrap(), 5);
        assert_eq!(y5.val_at_infinity().unwrap(), 5);
        // zero input is an error
        assert!(LocalizedYCoeff::<Rat>::zero(DenBase::Y).val_at_zero().is_err());
    }

    #[test]
    fn localized_reduce_and_inv() {
        let c3 = DenBase::C3.poly::<Rat>();
        // (C3^2 * (y+2)) / C3^3 reduces to (y+2)/C3
        let num = c3.pow(2).mul(&Poly::from_i64s(&[2, 1]));
        let c = LocalizedYCoeff::new(num, 3, DenBase::C3);
        assert_eq!(c.pow(), 1);
        assert_eq!(c.num(), &Poly::from_i64s(&[2, 1]));
        // inverse of y^3 in K[y, y^-1]
        let c = LocalizedYCoeff::<Rat>::from_poly(Poly::var().pow(3), DenBase::Y);
        let i = c.inv().unwrap();
        assert!(c.mul(&i) == LocalizedYCoeff::one(DenBase::Y));
        // inverse of C3 itself
        let c = LocalizedYCoeff::<Rat>::from_poly(DenBase::C3.poly(), DenBase::C3);
        let i = c.inv().unwrap();
        assert!(c.mul(&i) == LocalizedYCoeff::one(DenBase::C3));
        // y+2 is not invertible in K[y, C3^-1]
        let c = LocalizedYCoeff::<Rat>::from_poly(Poly::from_i64s(&[2, 1]), DenBase::C3);
        assert!(c.inv().is_err());
    }

    #[test]
    fn series_mul_monomials() {
        // (x^3 y) * (x^3 y) = x^6 y^2
        let mut a = TruncSeries::<Rat>::new(DenBase::Y, 3, -2);
        a.set(3, LocalizedYCoeff::from_poly(Poly::var(), DenBase::Y));
        let p = a.mul(&a);
        assert_eq!(p.top(), 6);
        assert_eq!(
            p.coeff(6).unwrap(),
            LocalizedYCoeff::from_poly(Poly::var().pow(2), DenBase::Y)
        );
    }

    #[test]
    fn series_square_symbolic() {
        // (x^3 C3 + x^2 C2)^2 = x^6 C3^2 + 2 x^5 C3 C2 + x^4 C2^2,
        // with C3, C2 as opaque parameters.
        let ring = ParamRing::new(&["c3", "c2"]);
        let c3 = ring.param("c3").unwrap();
        let c2 = ring.param("c2").unwrap();
        let lift = |p: &crate::exactalg::ParamElem| {
            LocalizedYCoeff::from_poly(Poly::constant(p.clone()), DenBase::Y)
        };
        let mut s = TruncSeries::new(DenBase::Y, 3, 0);
        s.set(3, lift(&c3));
        s.set(2, lift(&c2));
        let sq = s.square();
        assert_eq!(sq.coeff(6).unwrap(), lift(&c3.mul(&c3)));
        assert_eq!(
            sq.coeff(5).unwrap(),
            lift(&c3.mul(&c2).mul(&crate::exactalg::ParamElem::from_i64(2)))
        );
        assert_eq!(sq.coeff(4).unwrap(), lift(&c2.mul(&c2)));
        assert_eq!(sq.trunc_order(), 3);
    }

    #[test]
    fn series_mul_truncation_tracking() {
        // a known on [0, 3], b known on [-1, 2]: product known down to
        // max(0 + 2, -1 + 3) = 2.
        let mut a = TruncSeries::<Rat>::new(DenBase::Y, 3, 0);
        a.set(3, LocalizedYCoeff::one(DenBase::Y));
        a.set(0, LocalizedYCoeff::one(DenBase::Y));
        let mut b = TruncSeries::<Rat>::new(DenBase::Y, 2, -1);
        b.set(2, LocalizedYCoeff::one(DenBase::Y));
        b.set(-1, LocalizedYCoeff::one(DenBase::Y));
        let p = a.mul(&b);
        assert_eq!(p.trunc_order(), 2);
        assert_eq!(p.top(), 5);
        assert!(p.coeff(1).is_err());
    }

    #[test]
    fn series_mul_associative_up_to_truncation() {
        let mut rng = crate::rng::Rng::new(17);
        for _ in 0..40 {
            let mut mk = |top: i64, ord: i64| {
                let mut s = TruncSeries::<Rat>::new(DenBase::Y, top, ord);
                for k in ord..=top {
                    if rng.below(3) != 0 {
                        let d = rng.below(3) as usize;
                        let mut cs = vec![];
                        for _ in 0..=d {
                            cs.push(rng.rat());
                        }
                        s.set(
                            k,
                            LocalizedYCoeff::new(Poly::new(cs), rng.below(2) as u32, DenBase::Y),
                        );
                    }
                }
                s
            };
            let a = mk(3, -2);
            let b = mk(2, -3);
            let c = mk(1, -1);
            let ab_c = a.mul(&b).mul(&c);
            let a_bc = a.mul(&b.mul(&c));
            let ord = ab_c.trunc_order().max(a_bc.trunc_order());
            for k in ord..=ab_c.top().min(a_bc.top()) {
                assert_eq!(ab_c.coeff(k).unwrap(), a_bc.coeff(k).unwrap());
            }
        }
    }

    #[test]
    fn series_inverse() {
        // (x^3 y)^-1 agrees with x^-3 y^-1 on a monomial
        let mut s = TruncSeries::<Rat>::new(DenBase::Y, 3, 0);
        s.set(3, LocalizedYCoeff::from_poly(Poly::var(), DenBase::Y));
        s.set(1, LocalizedYCoeff::from_poly(Poly::one(), DenBase::Y));
        let inv = s.inverse().unwrap();
        let prod = s.mul(&inv);
        assert_eq!(prod.coeff(0).unwrap(), LocalizedYCoeff::one(DenBase::Y));
        for k in prod.trunc_order().max(-5)..0 {
            assert!(prod.coeff(k).unwrap().is_zero(), "x^{k} residue");
        }
    }

    #[test]
    fn shift_x_taylor() {
        // (x + c)^2 with c = y: x^2 + 2y x + y^2
        let mut s = TruncSeries::<Rat>::new(DenBase::Y, 2, -3);
        s.set(2, LocalizedYCoeff::one(DenBase::Y));
        let shifted = s.shift_x(&LocalizedYCoeff::from_poly(Poly::var(), DenBase::Y));
        assert_eq!(shifted.coeff(2).unwrap(), LocalizedYCoeff::one(DenBase::Y));
        assert_eq!(
            shifted.coeff(1).unwrap(),
            LocalizedYCoeff::from_poly(Poly::from_i64s(&[0, 2]), DenBase::Y)
        );
        assert_eq!(
            shifted.coeff(0).unwrap(),
            LocalizedYCoeff::from_poly(Poly::var().pow(2), DenBase::Y)
        );
        // x^-1 shifts into a geometric tail: (x+c)^-1 = x^-1 - c x^-2 + ...
        let mut s = TruncSeries::<Rat>::new(DenBase::Y, -1, -4);
        s.set(-1, LocalizedYCoeff::one(DenBase::Y));
        let c = LocalizedYCoeff::from_poly(Poly::<Rat>::var(), DenBase::Y);
        let shifted = s.shift_x(&c);
        assert_eq!(shifted.coeff(-1).unwrap(), LocalizedYCoeff::one(DenBase::Y));
        assert_eq!(
            shifted.coeff(-2).unwrap(),
            LocalizedYCoeff::from_poly(Poly::from_i64s(&[0, -1]), DenBase::Y)
        );
        assert_eq!(
            shifted.coeff(-3).unwrap(),
            LocalizedYCoeff::from_poly(Poly::var().pow(2), DenBase::Y)
        );
    }
}
