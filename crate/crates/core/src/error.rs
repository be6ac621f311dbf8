use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object {0}")]
    UnknownObject(usize),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid bibundle: {0}")]
    InvalidBibundle(String),
    #[error("bibundle is not right principal: {0}")]
    NotPrincipal(String),
    #[error("middle objects do not match: {0}")]
    MiddleMismatch(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("stacky group axioms failed: {0}")]
    AxiomsFailed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("(p, q) = ({0}, {1}) is not coprime")]
    NotCoprime(i64, i64),
    #[error("module class with (p, q) = (0, 0)")]
    ZeroClass,
    #[error("action leaves the realization window at index {0}")]
    WindowTooSmall(i64),
    #[error("no invertible pivot in column {0}")]
    NonUnitPivot(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
