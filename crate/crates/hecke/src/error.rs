use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("incompatible algebras: {0}")]
    Incompatible(String),
    #[error("non-rational eigenvalue encountered; unresolved characteristic factor {0}")]
    NonRationalEigenvalue(String),
    #[error("matrix is singular")]
    Singular,
    #[error("subspace is not invariant: {0}")]
    NotInvariant(String),
    #[error("irreducibility undecided: {0}")]
    Undecided(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T> = std::result::Result<T, HeckeError>;
