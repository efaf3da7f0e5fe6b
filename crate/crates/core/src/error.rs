use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumsetError {
    #[error("set must contain at least one element")]
    EmptySet,

    #[error("duplicate element {0}: inputs must be sets, not multisets")]
    DuplicateElement(i64),

    #[error("elements are not strictly increasing at position {index}")]
    NotSorted { index: usize },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("sum order k = {k} out of range 0..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("excluded element {0} is not a member of the set")]
    ExcludeNotInSet(i64),

    #[error("cap must be at least 1 (got {0})")]
    InvalidCap(u32),

    #[error("{what} would need {required} items, threshold is {threshold}")]
    ThresholdExceeded {
        what: &'static str,
        required: u128,
        threshold: u128,
    },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

impl SumsetError {
    pub(crate) fn overflow(what: impl Into<String>) -> Self {
        SumsetError::Overflow(what.into())
    }

    pub(crate) fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        SumsetError::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by a search or enumeration budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, SumsetError::ThresholdExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, SumsetError>;
