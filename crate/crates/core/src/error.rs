use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    /// An entry is out of range for the field or has the wrong number of digits.
    FieldMismatch,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax => f.write_str("syntax error"),
            ParseErrorKind::FieldMismatch => f.write_str("field mismatch"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("field of order {0} is too large for this library")]
    FieldTooLarge(u128),
    #[error("division by zero")]
    DivideByZero,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("matrix is singular")]
    Singular,
    #[error("characteristic polynomial does not split over the base field")]
    NotSplit,
    #[error("matrix is not diagonalizable")]
    NotDiagonalizable,
    #[error("matrix is not in companion form")]
    NotCompanion,
    #[error("no representation as a sum of two k-th powers")]
    NoRepresentation,
    #[error("no pair satisfies the constraints")]
    NoSolution,
    #[error("construction needs a larger field: {0}")]
    NeedLargerField(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("enumeration of {0} objects exceeds the guard")]
    TooLarge(u128),
    #[error("some matrices are not sums of k-th powers")]
    NotRepresentable,
    #[error("parse error at line {line}, column {col}: {kind}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        kind: ParseErrorKind,
        msg: String,
    },
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    pub(crate) fn need_larger(why: impl Into<String>) -> Self {
        Error::NeedLargerField(why.into())
    }
}
