use thiserror::Error;

#[derive(Debug, Error)]
pub enum DunklError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric accuracy not reached in {what}: residual {residual:e}")]
    Accuracy { what: String, residual: f64 },
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("order {got} exceeds the configured maximum {max}")]
    MaxOrder { got: usize, max: usize },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("internal consistency: {0}")]
    Consistency(String),
    #[error("config: {0}")]
    Config(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, DunklError>;
