use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("diagonal entry a[{index}][{index}] = {value} must be 2 or non-positive")]
    DiagonalViolation { index: usize, value: i64 },
    #[error("off-diagonal entry a[{i}][{j}] = {value} must be non-positive")]
    SignViolation { i: usize, j: usize, value: i64 },
    #[error("a[{i}][{j}] and a[{j}][{i}] must be zero together")]
    ZeroAsymmetry { i: usize, j: usize },
    #[error("malformed datum: {0}")]
    Malformed(String),
    #[error("symmetrizer does not symmetrize the matrix: {0}")]
    BadSymmetrizer(String),
    #[error("real index {label} carries level {level}, only level 1 exists")]
    LevelViolation { label: String, level: u32 },
    #[error("unknown index label {0:?}")]
    UnknownLabel(String),
    #[error("index {0} is imaginary, the real operator does not apply")]
    ImaginaryIndex(String),
    #[error("index {0} is real, the imaginary operator does not apply")]
    RealIndex(String),
    #[error("parameter {0} outside [0,1]")]
    OutOfRange(String),
    #[error("{what} exceeded bound {bound}")]
    BoundExceeded { what: String, bound: usize },
    #[error("root table of height {bound} is too small: roots of height up to {needed} may be needed")]
    TableTooSmall { bound: usize, needed: usize },
    #[error("reduced-word class exceeds enumeration cap {cap}")]
    EnumerationBound { cap: usize },
    #[error("precondition falsified: {0}")]
    PreconditionFalsified(String),
    #[error("reflection does not shorten the element")]
    NotShortening,
    #[error("index {0} does not occur in the word")]
    NoOccurrence(String),
    #[error("weight {0} has no witness in the orbit of a dominant weight")]
    WitnessMissing(String),
    #[error("truncations cannot be aligned: {0}")]
    TruncationIncomparable(String),
    #[error("root weights differ: {0}")]
    RootMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that signal an exhausted search budget rather than a
    /// definite answer; widening the bounds may resolve them.
    pub fn is_bound_exceeded(&self) -> bool {
        matches!(
            self,
            Error::BoundExceeded { .. } | Error::TableTooSmall { .. } | Error::EnumerationBound { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
