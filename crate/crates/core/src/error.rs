use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("index mismatch: expected length {expected}, found {found}")]
    IndexMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOut { index: usize, bound: usize },
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("subset violation: {0}")]
    SubsetViolation(String),
    #[error("invalid consequence relation: {0}")]
    InvalidRelation(String),
    #[error("invalid nucleus: {0}")]
    InvalidNucleus(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("divisibility violation: {0}")]
    DivisibilityViolation(String),
    #[error("bounds violation: {0}")]
    BoundsViolation(String),
    #[error("scheme mismatch: {0}")]
    SchemeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid fuzzy partition: {0}")]
    InvalidPartition(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
