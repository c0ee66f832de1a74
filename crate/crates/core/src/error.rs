use thiserror::Error;

/// Errors produced by the fitting, seeding, clustering and evaluation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FabrikError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("evaluation point {point} outside spline domain [{lo}, {hi}]")]
    OutOfDomain { point: f64, lo: f64, hi: f64 },

    #[error("least-squares system is rank deficient (column {column})")]
    SingularFit { column: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("at least {needed} samples required, got {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid k = {k} for {n} observations")]
    InvalidK { k: usize, n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid missingness mask: {0}")]
    InvalidMask(String),

    #[error("invalid proportion {0}: must lie in [0, 1)")]
    InvalidProportion(f64),

    #[error("label vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid method spec: {0}")]
    InvalidSpec(String),

    #[error("bootstrap replicate has fewer than {k} distinct rows after {attempts} draws")]
    DegenerateBootstrap { k: usize, attempts: usize },

    #[error("malformed data file: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for FabrikError {
    fn from(e: std::io::Error) -> Self {
        FabrikError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FabrikError>;
