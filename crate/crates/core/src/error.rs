use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {index} is not in the open unit ball (|x|^2 = {norm_sq})")]
    OutsideBall { index: usize, norm_sq: f64 },

    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "kernel matrix is not positive: min eigenvalue {min_eigenvalue:e}, max {max_eigenvalue:e}"
    )]
    NonPositive {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("matrix is ill-conditioned: condition estimate {estimate:e} exceeds cap {cap:e}")]
    IllConditioned { estimate: f64, cap: f64 },

    #[error("kernel value k(x_{index}, x_base) vanishes (|k| = {modulus:e}); cannot normalize")]
    ZeroKernelValue { index: usize, modulus: f64 },

    #[error("b = a*h fails at point {index}: residual {residual:e}")]
    NotRepresenting { index: usize, residual: f64 },

    #[error("corona identity a*u + b*v = 1 fails at point {index}: residual {residual:e}")]
    IdentityViolated { index: usize, residual: f64 },

    #[error("grid of size {grid_size} is too coarse: round-trip residual {residual:e}")]
    GridTooCoarse { grid_size: usize, residual: f64 },

    #[error("grid size {0} must be a power of two and at least 4")]
    BadGridSize(usize),

    #[error("truncated system is rank deficient (pivot {pivot:e})")]
    RankDeficient { pivot: f64 },

    #[error("constructive approximation stage `{stage}` not achieved: {detail}")]
    NotAchieved { stage: &'static str, detail: String },

    #[error("multi-index degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
