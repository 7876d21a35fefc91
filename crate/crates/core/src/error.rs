use thiserror::Error;

#[derive(Debug, Error)]
pub enum HvError {
    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("truncation order {order} exceeds the configured maximum {max}")]
    OrderOverflow { order: usize, max: usize },

    #[error("radius {0} is outside [0, 1)")]
    RadiusOutOfRange(f64),

    #[error("Möbius map hits its pole at z = {0}")]
    PoleHit(num_complex::Complex64),

    #[error("optimal domain norm is undefined for a constant symbol")]
    ConstantSymbol,

    #[error("Gram matrix is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HvError>;
