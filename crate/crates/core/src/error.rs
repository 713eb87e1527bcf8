//! Error type shared by the algebra and pipeline layers.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgError {
    /// Division by zero in a field or localized ring.
    DivisionByZero,
    /// An operation received the zero polynomial where a nonzero one is required.
    ZeroInput(&'static str),
    /// The named variable was expected in the input but is absent.
    MissingVariable(String),
    /// Two operands live over different variable sets or parameter rings.
    VarMismatch,
    /// Fractional supports (l > 1) are not allowed in Laurent arithmetic.
    FractionalSupport,
    /// A substitution image could not be inverted (negative power of a non-monomial).
    NonInvertibleImage,
    /// A coefficient failed to clear its denominator where a polynomial is required.
    ResidualDenominator { index: i64 },
    /// A valuation bound promised by the construction was violated.
    ValuationBound { index: i64, expected: i64, got: i64 },
    /// A resultant vanished identically for every elimination order tried.
    DegenerateResultant,
    /// A certificate step failed; the message carries the recomputed values.
    CheckFailed(String),
    /// Parse error in a polynomial or JSON text form.
    Parse(String),
    /// Precondition violation described by the message.
    Precondition(String),
}

impl fmt::Display for AlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgError::DivisionByZero => write!(f, "division by zero"),
            AlgError::ZeroInput(op) => write!(f, "{op}: zero input rejected"),
            AlgError::MissingVariable(v) => write!(f, "variable {v} absent from input"),
            AlgError::VarMismatch => write!(f, "operands over different variable sets"),
            AlgError::FractionalSupport => write!(f, "fractional support rejected"),
            AlgError::NonInvertibleImage => {
                write!(f, "negative power of a non-monomial substitution image")
            }
            AlgError::ResidualDenominator { index } => {
                write!(f, "coefficient at index {index} does not clear its denominator")
            }
            AlgError::ValuationBound { index, expected, got } => write!(
                f,
                "valuation bound violated at index {index}: expected <= {expected}, got {got}"
            ),
            AlgError::DegenerateResultant => {
                write!(f, "resultant identically zero for all elimination orders")
            }
            AlgError::CheckFailed(msg) => write!(f, "check failed: {msg}"),
            AlgError::Parse(msg) => write!(f, "parse error: {msg}"),
            AlgError::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl std::error::Error for AlgError {}

pub type Result<T> = std::result::Result<T, AlgError>;
