use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("unknown model spec: {0}")]
    ModelSpec(String),
    #[error("operation not supported: {0}")]
    Capability(String),
    #[error("map is not dominant: {0}")]
    NonDominant(String),
    #[error("class is not ample: {0}")]
    NotAmple(String),
    #[error("model data inconsistent: {0}")]
    ModelData(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
