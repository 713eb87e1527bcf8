//! Sparse bivariate Laurent polynomials and the maps applied to them.
//!
//! Exponents live in ZxZ. The optional denominator `l` scaling the first
//! exponent exists only so polygon data with fractional corners can round-trip
//! through the JSON form; all arithmetic requires l = 1.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{AlgError, Result};
use crate::exactalg::{Rat, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly<T: Scalar> {
    terms: BTreeMap<(i64, i64), T>,
    l: i64,
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
            l: 1,
        }
    }

    pub fn one() -> Self {
        Self::monomial(T::one(), 0, 0)
    }

    pub fn monomial(c: T, i: i64, j: i64) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((i, j), c);
        }
        p
    }

    pub fn x() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), T)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.insert_add((i, j), c);
        }
        p
    }

    /// Tag a fractional first-exponent denominator (polygon data only).
    pub fn with_l(mut self, l: i64) -> Self {
        assert!(l >= 1);
        self.l = l;
        self
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: i64, j: i64) -> T {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(T::zero)
    }

    pub fn support(&self) -> Vec<(i64, i64)> {
        self.terms.keys().copied().collect()
    }

    fn insert_add(&mut self, e: (i64, i64), c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn require_integral(&self, op: &'static str) -> Result<()> {
        if self.l != 1 {
            return Err(AlgError::Precondition(format!("{op}: requires l = 1")));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.insert_add(e, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, c.neg())).collect(),
            l: self.l,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        out.l = self.l;
        for (&(ia, ja), ca) in &self.terms {
            for (&(ib, jb), cb) in &rhs.terms {
                out.insert_add((ia + ib, ja + jb), ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, a)| (e, a.mul(c))).collect(),
            l: self.l,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
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

    /// Inverse, defined only for single-term polynomials.
    pub fn monomial_inv(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(AlgError::NonInvertibleImage);
        }
        let (&(i, j), c) = self.terms.iter().next().unwrap();
        Ok(Self::monomial(c.inv().ok_or(AlgError::DivisionByZero)?, -i, -j))
    }

    pub fn pow_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.monomial_inv()?.pow((-e) as u32))
        }
    }

    pub fn partial_x(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.insert_add((i - 1, j), c.mul(&T::from_i64(i)));
        }
        out
    }

    pub fn partial_y(&self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out.insert_add((i, j - 1), c.mul(&T::from_i64(j)));
        }
        out
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (&(i, j), c) in self.terms.iter().rev() {
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
            let mut mono = String::new();
            for (name, e) in [("x", i), ("y", j)] {
                if e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if e == 1 {
                    mono.push_str(name);
                } else {
                    mono.push_str(&format!("{name}^{e}"));
                }
            }
            if mono.is_empty() || mag != "1" {
                out.push_str(&mag);
                if !mono.is_empty() {
                    out.push('*');
                }
            }
            out.push_str(&mono);
        }
        out
    }
}

impl LaurentPoly<Rat> {
    /// JSON form `{"vars":["x","y"],"l":1,"terms":[{"e":[i,j],"c":"num/den"}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| json!({"e": [i, j], "c": c.to_string()}))
            .collect();
        json!({"vars": ["x", "y"], "l": self.l, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| AlgError::Parse(format!("laurent json: {m}"));
        let l = v.get("l").and_then(Value::as_i64).unwrap_or(1);
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing terms"))?;
        let mut p = Self::zero().with_l(l);
        for t in terms {
            let e = t
                .get("e")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing e"))?;
            if e.len() != 2 {
                return Err(bad("exponent arity"));
            }
            let i = e[0].as_i64().ok_or_else(|| bad("exponent type"))?;
            let j = e[1].as_i64().ok_or_else(|| bad("exponent type"))?;
            let c = t
                .get("c")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("missing c"))?;
            p.insert_add((i, j), Rat::parse(c)?);
        }
        Ok(p)
    }
}

impl<T: Scalar> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Jacobian bracket `[P,Q] = P_x Q_y - P_y Q_x`. Rejects fractional supports.
pub fn bracket<T: Scalar>(p: &LaurentPoly<T>, q: &LaurentPoly<T>) -> Result<LaurentPoly<T>> {
    if p.l() != 1 || q.l() != 1 {
        return Err(AlgError::FractionalSupport);
    }
    Ok(p.partial_x()
        .mul(&q.partial_y())
        .sub(&p.partial_y().mul(&q.partial_x())))
}

/// A ring morphism given by the images of x and y. The Jacobian factor
/// `[phi(x), phi(y)]` must be nonzero.
#[derive(Clone, Debug)]
pub struct RingMap<T: Scalar> {
    x_image: LaurentPoly<T>,
    y_image: LaurentPoly<T>,
}

impl<T: Scalar> RingMap<T> {
    pub fn new(x_image: LaurentPoly<T>, y_image: LaurentPoly<T>) -> Result<Self> {
        let m = RingMap { x_image, y_image };
        if m.jacobian_factor()?.is_zero() {
            return Err(AlgError::Precondition(
                "ring map with zero Jacobian factor".into(),
            ));
        }
        Ok(m)
    }

    /// x -> y, y -> x.
    pub fn swap() -> Self {
        RingMap {
            x_image: LaurentPoly::y(),
            y_image: LaurentPoly::x(),
        }
    }

    /// x -> x^-1, y -> x^k y.
    pub fn invert_x_shift_y(k: i64) -> Self {
        RingMap {
            x_image: LaurentPoly::monomial(T::one(), -1, 0),
            y_image: LaurentPoly::monomial(T::one(), k, 1),
        }
    }

    /// x -> x, y -> y + lambda x^-k.
    pub fn shear_y(lambda: T, k: i64) -> Self {
        RingMap {
            x_image: LaurentPoly::x(),
            y_image: LaurentPoly::y().add(&LaurentPoly::monomial(lambda, -k, 0)),
        }
    }

    /// x -> x + lambda, y -> y.
    pub fn translate_x(lambda: T) -> Self {
        RingMap {
            x_image: LaurentPoly::x().add(&LaurentPoly::monomial(lambda, 0, 0)),
            y_image: LaurentPoly::y(),
        }
    }

    pub fn x_image(&self) -> &LaurentPoly<T> {
        &self.x_image
    }

    pub fn y_image(&self) -> &LaurentPoly<T> {
        &self.y_image
    }

    /// Exact substitution. Negative exponents require the corresponding image
    /// to be a monomial; every map used by the pipelines satisfies this.
    pub fn apply(&self, p: &LaurentPoly<T>) -> Result<LaurentPoly<T>> {
        p.require_integral("apply_map")?;
        let mut x_pows: BTreeMap<i64, LaurentPoly<T>> = BTreeMap::new();
        let mut y_pows: BTreeMap<i64, LaurentPoly<T>> = BTreeMap::new();
        let mut out = LaurentPoly::zero();
        for (&(i, j), c) in &p.terms {
            if let std::collections::btree_map::Entry::Vacant(v) = x_pows.entry(i) {
                v.insert(self.x_image.pow_signed(i)?);
            }
            if let std::collections::btree_map::Entry::Vacant(v) = y_pows.entry(j) {
                v.insert(self.y_image.pow_signed(j)?);
            }
            let term = x_pows[&i].mul(&y_pows[&j]).mul_scalar(c);
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `[phi(x), phi(y)]`.
    pub fn jacobian_factor(&self) -> Result<LaurentPoly<T>> {
        bracket(&self.x_image, &self.y_image)
    }

    /// Chain rule: `[phi(P), phi(Q)] = phi([P,Q]) * [phi(x), phi(y)]`.
    /// Returns the right-hand side for a given bracket value.
    pub fn bracket_scaling(&self, bracket_value: &LaurentPoly<T>) -> Result<LaurentPoly<T>> {
        Ok(self.apply(bracket_value)?.mul(&self.jacobian_factor()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{ParamRing, Rat};
    use crate::rng::Rng;

    type LP = LaurentPoly<Rat>;

    fn mono(c: i64, i: i64, j: i64) -> LP {
        LP::monomial(Rat::from_int(c), i, j)
    }

    fn random_poly(rng: &mut Rng) -> LP {
        let mut p = LP::zero();
        for _ in 0..6 {
            p = p.add(&LP::monomial(
                rng.rat(),
                rng.i64_in(-4, 5),
                rng.i64_in(0, 5),
            ));
        }
        p
    }

    #[test]
    fn bracket_examples() {
        // [x, y] = 1
        assert_eq!(bracket(&LP::x(), &LP::y()).unwrap(), LP::one());
        // [x^3 y, x] = -x^3, frozen from the hand partials
        // d/dx(x^3 y) = 3x^2 y, d/dy(x^3 y) = x^3, so bracket = -x^3.
        assert_eq!(
            bracket(&mono(1, 3, 1), &LP::x()).unwrap(),
            mono(-1, 3, 0)
        );
        // powers of one element commute
        let w = mono(1, 3, 1);
        assert!(bracket(&w.pow(2), &w.pow(3)).unwrap().is_zero());
    }

    #[test]
    fn bracket_rejects_fractional_support() {
        let p = LP::x().with_l(4);
        assert_eq!(
            bracket(&p, &LP::y()),
            Err(AlgError::FractionalSupport)
        );
    }

    #[test]
    fn bracket_bilinear_antisymmetric_leibniz() {
        let mut rng = Rng::new(23);
        for _ in 0..100 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            let r = random_poly(&mut rng);
            let c = rng.rat();
            // antisymmetry and [p, p] = 0
            assert!(bracket(&p, &p).unwrap().is_zero());
            assert_eq!(
                bracket(&p, &q).unwrap(),
                bracket(&q, &p).unwrap().neg()
            );
            // bilinearity in the first slot
            let lhs = bracket(&p.mul_scalar(&c).add(&q), &r).unwrap();
            let rhs = bracket(&p, &r).unwrap().mul_scalar(&c).add(&bracket(&q, &r).unwrap());
            assert_eq!(lhs, rhs);
            // Leibniz: [pq, r] = p[q, r] + q[p, r]
            let lhs = bracket(&p.mul(&q), &r).unwrap();
            let rhs = p.mul(&bracket(&q, &r).unwrap()).add(&q.mul(&bracket(&p, &r).unwrap()));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn apply_map_examples() {
        // x -> x^-1, y -> x^3 y sends x^21 y^7 to y^7
        let m = RingMap::<Rat>::invert_x_shift_y(3);
        assert_eq!(m.apply(&mono(1, 21, 7)).unwrap(), mono(1, 0, 7));
        // swap sends x^9 y^27 to x^27 y^9
        assert_eq!(
            RingMap::<Rat>::swap().apply(&mono(1, 9, 27)).unwrap(),
            mono(1, 27, 9)
        );
        // y -> y + lambda x^-2 on x^2 y gives x^2 y + lambda, with lambda symbolic
        let ring = ParamRing::new(&["lambda"]);
        let lam = ring.param("lambda").unwrap();
        let m = RingMap::shear_y(lam.clone(), 2);
        let p = LaurentPoly::monomial(ring.one(), 2, 1);
        let expect = LaurentPoly::monomial(ring.one(), 2, 1)
            .add(&LaurentPoly::monomial(lam, 0, 0));
        assert_eq!(m.apply(&p).unwrap(), expect);
    }

    #[test]
    fn apply_map_is_ring_morphism() {
        let mut rng = Rng::new(29);
        let maps = [
            RingMap::<Rat>::swap(),
            RingMap::invert_x_shift_y(3),
            RingMap::invert_x_shift_y(4),
            RingMap::shear_y(Rat::from_frac(2, 3), 2),
            RingMap::shear_y(Rat::from_int(-5), 3),
        ];
        for _ in 0..100 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            let m = &maps[rng.below(maps.len() as u64) as usize];
            assert_eq!(
                m.apply(&p.mul(&q)).unwrap(),
                m.apply(&p).unwrap().mul(&m.apply(&q).unwrap())
            );
            assert_eq!(
                m.apply(&p.add(&q)).unwrap(),
                m.apply(&p).unwrap().add(&m.apply(&q).unwrap())
            );
        }
    }

    #[test]
    fn bracket_scaling_examples() {
        // (x -> x^-1, y -> x^3 y): [phi(x), phi(y)] = -x
        let m = RingMap::<Rat>::invert_x_shift_y(3);
        assert_eq!(m.bracket_scaling(&LP::one()).unwrap(), mono(-1, 1, 0));
        // (x -> x^-1, y -> x^4 y): factor -x^2
        let m = RingMap::<Rat>::invert_x_shift_y(4);
        assert_eq!(m.bracket_scaling(&LP::one()).unwrap(), mono(-1, 2, 0));
        // swap flips orientation
        let m = RingMap::<Rat>::swap();
        assert_eq!(m.bracket_scaling(&LP::one()).unwrap(), mono(-1, 0, 0));
    }

    #[test]
    fn chain_rule_exact_on_random_pairs() {
        let mut rng = Rng::new(31);
        let maps = [
            RingMap::<Rat>::swap(),
            RingMap::invert_x_shift_y(3),
            RingMap::invert_x_shift_y(4),
            RingMap::shear_y(Rat::from_int(2), 2),
            RingMap::shear_y(Rat::from_frac(-1, 2), 3),
        ];
        for k in 0..100 {
            let p = random_poly(&mut rng);
            let q = random_poly(&mut rng);
            let m = &maps[k % maps.len()];
            let lhs = bracket(&m.apply(&p).unwrap(), &m.apply(&q).unwrap()).unwrap();
            let rhs = m.bracket_scaling(&bracket(&p, &q).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn json_roundtrip_is_identity() {
        let mut rng = Rng::new(37);
        for _ in 0..50 {
            let p = random_poly(&mut rng);
            let v = p.to_json();
            let q = LaurentPoly::from_json(&v).unwrap();
            assert_eq!(p, q);
            assert_eq!(v, q.to_json());
        }
    }
}
