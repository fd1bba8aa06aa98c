use thiserror::Error;

/// Errors raised across the algebra, dressing and closed-form layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TodaError {
    #[error("invalid Toda class: {0}")]
    InvalidClass(String),

    #[error("invalid soliton data: {0}")]
    InvalidSpec(String),

    #[error("index {name} = {value} out of range {lo}..={hi}")]
    OutOfRange {
        name: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("solution singular (alpha = {alpha}) at z- = {z_minus}, z+ = {z_plus}")]
    SolutionSingular {
        alpha: usize,
        z_minus: f64,
        z_plus: f64,
    },

    #[error("loop parameter {lambda_re}+{lambda_im}i is within {distance:e} of a dressing pole")]
    NearPole {
        lambda_re: f64,
        lambda_im: f64,
        distance: f64,
    },

    #[error("degenerate parameters: {quantity} = {value:e}")]
    DegenerateParameters { quantity: String, value: f64 },
}

pub type Result<T> = std::result::Result<T, TodaError>;
