use alloc::string::String;
use core::fmt;

use crate::arith::Scalar;

/// Errors raised by constructors, verifiers and the integer search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the documented domain of the operation.
    InvalidArgument(String),
    /// Two objects that must share a dimension do not.
    DimensionMismatch { expected: usize, got: usize },
    /// Two scalars live in different quadratic fields.
    MixedRadicands(u64, u64),
    /// A matrix that had to be doubly nonnegative is not; `value` is the offending exact quantity.
    NotDnn { context: String, value: Scalar },
    /// A remainder block could not be certified completely positive.
    NotCpCertified { context: String, value: Scalar },
    /// A construction step produced something its derivation rules out.
    InternalContradiction(String),
    /// A configured resource bound was exhausted before a verdict.
    ResourceLimit(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::MixedRadicands(a, b) => {
                write!(f, "scalars from different fields: sqrt({a}) and sqrt({b})")
            }
            Error::NotDnn { context, value } => {
                write!(
                    f,
                    "not doubly nonnegative ({context}): offending value {value}"
                )
            }
            Error::NotCpCertified { context, value } => {
                write!(
                    f,
                    "remainder not certified completely positive ({context}): {value}"
                )
            }
            Error::InternalContradiction(msg) => write!(f, "internal contradiction: {msg}"),
            Error::ResourceLimit(msg) => write!(f, "resource limit reached: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
