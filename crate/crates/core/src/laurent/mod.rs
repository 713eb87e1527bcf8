//! Bivariate Laurent polynomials, Jacobian brackets, ring maps, and truncated
//! x-descending series with localized y-coefficients.

mod lpoly;
mod series;

pub use lpoly::{bracket, LaurentPoly, RingMap};
pub use series::{DenBase, LocalizedYCoeff, TruncSeries};
