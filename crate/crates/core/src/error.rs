use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an element of the coefficient ring")]
    NotInRing(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomial is not symmetric in the given variables")]
    NotSymmetric,
    #[error("series is not composable (nonzero constant term)")]
    NotComposable,
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),
    #[error("the zero series has no degree")]
    ZeroSeries,
    #[error("series is not in the image of x -> -x*xbar (residual at order {0})")]
    NotInImage(u32),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("not a 2-valued formal group law: {0}")]
    Not2Fgl(String),
    #[error("2-valued formal group law is not of type I")]
    NotTypeI,
    #[error("not a formal group law: {0}")]
    NotFgl(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("step budget of {0} pair reductions exhausted")]
    BudgetExhausted(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
