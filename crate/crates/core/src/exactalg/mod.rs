//! Exact scalar and polynomial arithmetic.
//!
//! Everything here is immutable after construction and all operations are
//! pure, so values can be shared freely across threads.

mod scalar;
mod rat;
mod poly;
mod mpoly;
mod params;

pub use scalar::Scalar;
pub use rat::Rat;
pub use poly::{Mult, Poly, UniPoly};
pub use mpoly::{varset, MPoly};
pub use params::{mpoly_gcd, ParamElem, ParamRing};
