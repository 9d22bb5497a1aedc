use thiserror::Error;

/// Errors raised by the algebraic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomials are over different variable lists")]
    VariableMismatch,
    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("multi-index is not componentwise below the other")]
    NotComponentwiseLe,
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("relation for generator `{0}` is not monic-triangular")]
    NonMonicRelation(String),
    #[error("generator `{0}` does not divide the chart denominator")]
    MissingInvertibleGenerator(String),
    #[error("chart denominator is zero")]
    ZeroDenominator,
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("operands live on different charts (`{0}` vs `{1}`)")]
    ChartMismatch(String, String),
    #[error("element is not invertible on chart `{0}`")]
    NotInvertible(String),
    #[error("ring homomorphism is ill-defined: {0}")]
    InvalidHomomorphism(String),

    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(u32, u32),
    #[error("operation lowers the truncation order below zero")]
    OrderUnderflow,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("L-basis element of degree {degree} exceeds truncation {max}")]
    DegreeTooLarge { degree: u32, max: u32 },

    #[error("transition inverse check failed: {0}")]
    InverseCheckFailed(String),
    #[error("transition Jacobians are not mutually inverse")]
    JacobianNotInvertible,
    #[error("transition functions are only defined for |m| >= 1")]
    ZeroMultiIndex,
    #[error("atlas has no transition from `{0}` to `{1}`")]
    MissingTransition(String, String),
    #[error("atlas has no triple overlap for ({0}, {1}, {2})")]
    MissingTripleOverlap(String, String, String),
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
