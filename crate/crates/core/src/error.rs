use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: String,
        cap: String,
    },

    #[error("cannot factor {0}: beyond the factoring cap or primality range")]
    FactorizationTooHard(String),

    #[error("p-adic valuation of zero is infinite")]
    ZeroValuation,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{divisor} does not divide {dividend}")]
    DivisibilityViolation { divisor: String, dividend: String },

    #[error("{candidates} candidate matrices exceed the enumeration limit {limit}")]
    TooLargeForEnumeration { candidates: String, limit: String },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: impl ToString, cap: impl ToString) -> Self {
        Error::CapExceeded {
            what,
            value: value.to_string(),
            cap: cap.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
