use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid discriminant {0}: {1}")]
    InvalidDiscriminant(String, &'static str),

    #[error("unsupported field: fundamental discriminant {0} is not -3 or -4")]
    UnsupportedField(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("discriminant {0} exceeds the enumeration cap {1}")]
    CapExceeded(String, u64),

    #[error("cannot factor {0}: beyond the supported range")]
    FactorLimit(String),

    #[error("{0} does not divide {1}")]
    NotDivisible(u64, u64),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True when the error signals a failed internal invariant rather than bad input.
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
