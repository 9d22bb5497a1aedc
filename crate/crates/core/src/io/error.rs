use thiserror::Error;

/// Errors from parsing, file loading and suite execution.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("illegal denominator `{0}`: only divisors of a power of the chart denominator may be inverted")]
    IllegalDenominator(String),
    #[error("malformed {what}: {msg}")]
    Malformed { what: &'static str, msg: String },
    #[error("schema error at {}", .0.join(", "))]
    Schema(Vec<String>),
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("cannot read `{path}`: {msg}")]
    Read { path: String, msg: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error(transparent)]
    Core(#[from] crate::error::Error),
}

impl IoError {
    pub(crate) fn malformed(what: &'static str, msg: impl Into<String>) -> Self {
        IoError::Malformed { what, msg: msg.into() }
    }
}

pub type IoResult<T> = std::result::Result<T, IoError>;
