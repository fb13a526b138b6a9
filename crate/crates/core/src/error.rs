use alloc::string::String;
use core::fmt;

use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A scalar argument is outside its admissible range.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// The body has no interior around the origin or is otherwise unusable.
    DegenerateBody(&'static str),
    EmptyInput(&'static str),
    BudgetTooSmall {
        needed: usize,
        got: usize,
    },
    Lp(LpError),
    /// A hypothesis of a construction does not hold for the given input.
    HypothesisViolated(String),
    /// A postcondition check failed. Never expected on valid input.
    CertificationFailure(String),
    /// The recurrence stopped growing before reaching the requested size.
    SequenceNotIncreasing {
        index: usize,
        previous: f64,
        next: f64,
    },
    /// The recurrence left the domain where its defining relation is solvable.
    SequenceDomain {
        index: usize,
        value: f64,
    },
    SequenceOverflow {
        index: usize,
    },
    /// `log₂ N < 1`, where `γ` divides by the covering exponent.
    UndefinedExponent,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::DegenerateBody(why) => write!(f, "degenerate body: {why}"),
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::BudgetTooSmall { needed, got } => {
                write!(
                    f,
                    "budget {got} below the minimum {needed} for this dimension"
                )
            }
            Error::Lp(e) => write!(f, "linear program failed: {e}"),
            Error::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            Error::CertificationFailure(msg) => write!(f, "certification failure: {msg}"),
            Error::SequenceNotIncreasing {
                index,
                previous,
                next,
            } => write!(
                f,
                "sequence not increasing at index {index}: {previous} -> {next} (start value too small)"
            ),
            Error::SequenceDomain { index, value } => write!(
                f,
                "no solution of the defining relation at index {index} (value {value})"
            ),
            Error::SequenceOverflow { index } => write!(f, "sequence overflow at index {index}"),
            Error::UndefinedExponent => f.write_str("covering exponent k < 1, gamma undefined"),
        }
    }
}

impl core::error::Error for Error {}

impl From<LpError> for Error {
    fn from(e: LpError) -> Self {
        Error::Lp(e)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), Error> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64, Error> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be finite and positive",
        })
    }
}
