//! Coefficient-field abstraction.

use std::fmt::{Debug, Display};

use super::Poly;

/// An exact field element. Implemented by [`crate::exactalg::Rat`] and
/// [`crate::exactalg::ParamElem`]; polynomials and series are generic over it.
pub trait Scalar: Clone + PartialEq + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Exact square root in the field, if one exists. Decisive: `None` means
    /// the element is definitely not a square.
    fn sqrt(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv().expect("division by zero"))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_i64(num).div(&Self::from_i64(den))
    }

    /// Optional growth-controlled route for univariate polynomial gcd over
    /// this field. Fields whose elements carry polynomial structure (fraction
    /// fields) override this with a cleared-denominator primitive-PRS gcd;
    /// the default `None` lets [`Poly::gcd`] fall back to monic Euclid.
    fn poly_gcd_override(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }
}
