use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("non-finite matrix entry at ({row}, {col})")]
    NumericInput { row: usize, col: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("word {word} is not a Wigner word (classified as {class})")]
    Classification { word: String, class: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("words share no edge")]
    NoSharedEdge,
    #[error("sample size too small: need at least {required}, got {got}")]
    SampleSize { required: usize, got: usize },
    #[error("input error: {0}")]
    Input(String),
    #[error("undefined variance: sample is constant")]
    UndefinedVariance,
    #[error("unknown distribution '{0}'")]
    UnknownDistribution(String),
    #[error("invalid configuration: {key}: {message}")]
    Config { key: String, message: String },
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
