//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("scalar field mismatch: {0}")]
    FieldMismatch(String),
    #[error("zero vector not allowed: {0}")]
    ZeroVector(String),
    #[error("insufficient sampling: angular step of {step} turns at sample {index} is ambiguous")]
    InsufficientSampling { index: usize, step: f64 },
    #[error("path endpoint mismatch: |end - start| = {gap} turns")]
    EndpointMismatch { gap: f64 },
    #[error("reparametrization samples are not monotone at index {index}")]
    NonMonotone { index: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("relation search supports at most {max} approximate coordinates, got {got}")]
    RelationSearchDim { max: usize, got: usize },
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
