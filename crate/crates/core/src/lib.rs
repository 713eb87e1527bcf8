//! Exact-arithmetic workbench for Newton-polygon analysis of plane Jacobian
//! pairs.
//!
//! The crate is organized around seven subsystems:
//! - [`exactalg`]: rationals, dense univariate and sparse multivariate
//!   polynomials, parameter fields, gcd/squarefree/resultant/square-root
//!   primitives.
//! - [`laurent`]: bivariate Laurent polynomials, Jacobian brackets, ring maps
//!   (swaps, shears, monomial substitutions) and truncated x-descending series
//!   with localized y-coefficients.
//! - [`newton`]: supports, convex polygons, primitive directions, directional
//!   valuations, leading forms, st/en endpoints and Pred/Succ navigation.
//! - [`startpoints`]: enumeration of possible starting corners for an edge
//!   ending at a given corner.
//! - [`approxroot`]: order-by-order construction of approximate square roots,
//!   valuation certificates, the polynomiality transform and a linear ODE
//!   solver by coefficient matching.
//! - [`elimination`]: symbolic generation of the coefficient systems,
//!   resultant-based elimination to the principal equations, and the terminal
//!   contradiction certificates.
//! - [`casebook`]: the case table, per-case certificate pipelines and report
//!   rendering.

pub mod error;
pub mod rng;

pub mod exactalg;
pub mod laurent;
pub mod newton;
pub mod startpoints;
pub mod approxroot;
pub mod elimination;
pub mod casebook;

pub use error::AlgError;
