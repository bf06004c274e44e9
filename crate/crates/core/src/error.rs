use thiserror::Error;

/// Errors raised by the geometric kernels, the function calculus and the I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (supported: 2, 3)")]
    UnsupportedDimension(usize),

    #[error("operation `{0}` is only available in dimension 2")]
    PlanarOnly(&'static str),

    #[error("scale factor must be non-negative, got {0}")]
    NegativeScale(f64),

    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("linear map is singular (|det| = {0:e})")]
    SingularMap(f64),

    #[error("expected {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("invalid layer cake: {0}")]
    InvalidLayerCake(String),

    #[error("invalid convex profile: {0}")]
    InvalidProfile(String),

    #[error("invalid ball approximation: {0}")]
    InvalidBall(String),

    #[error("threshold {0} outside (0, 1]")]
    ThresholdOutOfRange(f64),

    #[error("underdetermined fit: need at least {needed} distinct sample points, got {got}")]
    Underdetermined { needed: usize, got: usize },

    #[error("alpha mismatch: {0} vs {1}")]
    AlphaMismatch(f64, f64),

    #[error("alpha must satisfy alpha <= 0, got {0}")]
    PositiveAlpha(f64),

    #[error("no convex base exists for alpha = -inf")]
    NoBase,

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("malformed input {path}: {source}")]
    Input { path: String, source: serde_json::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
