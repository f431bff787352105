//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Errors reported by constructors and operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidArgument(String),
    /// Two values that must agree on party count or dimension do not.
    DimensionMismatch { expected: usize, got: usize },
    /// The requested exact enumeration exceeds the supported size.
    UnsupportedSize(String),
    /// An iterative numerical procedure failed to converge.
    NumericalFailure(String),
    /// A visibility threshold was requested for a state with no violation
    /// even at unit visibility.
    NoViolationAtUnitVisibility,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::UnsupportedSize(msg) => write!(f, "unsupported size: {msg}"),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::NoViolationAtUnitVisibility => {
                write!(f, "no violation at unit visibility (p = 1)")
            }
        }
    }
}

impl core::error::Error for Error {}
