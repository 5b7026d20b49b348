use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid index {index} out of range (grid has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("step {step} lies past the swap maturity")]
    StepPastMaturity { step: usize },

    #[error("series shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("ASF weight must be positive to back-solve debt, got {0}")]
    NonPositiveAlpha(f64),

    #[error("no funding quotes supplied")]
    NoQuotes,

    #[error("quote {0} has zero duration in payment periods")]
    ZeroDurationQuote(String),

    #[error("terminal node {0} is unreachable")]
    UnreachableTerminal(usize),

    #[error("enumeration would visit {count} policies, limit is {limit}")]
    EnumerationLimit { count: u128, limit: u128 },

    #[error("config error at `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("could not parse config: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
