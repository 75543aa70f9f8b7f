use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KzError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid index: {0}")]
    Index(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("evaluation at pole z{0}")]
    AtPole(usize),
    #[error("rho = {0} is not supported here; the residue conditions are stated for rho = -1")]
    RhoMismatch(i64),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("path error: {0}")]
    Path(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("independence certification failed after {0} probes")]
    Certification(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, KzError>;
