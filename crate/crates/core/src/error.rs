use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("matrix is singular: {0}")]
    Singular(String),
    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(usize),
    #[error("point is not on the unit sphere (norm = {0})")]
    NotUnitVector(f64),
    #[error("point lies outside the closed unit ball (norm = {0})")]
    OutsideBall(f64),
    #[error("operation requires n >= {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
