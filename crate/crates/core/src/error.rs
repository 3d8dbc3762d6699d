use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u64),
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("series must have constant term 1")]
    InvalidSeries,
    #[error("the zero polynomial has no leading monomial")]
    EmptyPoly,
    #[error("monomial budget exceeded: {needed} columns requested, budget {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("rewriting did not terminate within {0} steps")]
    StepBudgetExceeded(usize),
    #[error("algebra has no distinguished element t")]
    NoDistinguishedElement,
    #[error("invalid distinguished element: {0}")]
    InvalidDistinguished(String),
    #[error("Magnus expansion is trivial through degree {0}")]
    TruncationTooLow(usize),
    #[error("relator has a nonzero degree-1 Magnus part")]
    NotInFrattini,
    #[error("group of order {order} is not a {p}-group")]
    NotAPGroup { order: usize, p: u32 },
    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),
    #[error("invalid Demushkin parameters: {0}")]
    InvalidDemushkinParams(String),
    #[error("recipe not admissible: {0}")]
    InadmissibleRecipe(String),
    #[error("invalid generator order: {0}")]
    InvalidOrder(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
