use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements of Q(z_{0}) and Q(z_{1}) cannot be combined")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("coroots not free: {0}")]
    NotFree(String),
    #[error("parameter constraint violated: {0}")]
    ParameterConstraint(String),
    #[error("singular at tau: {0}")]
    Singular(String),
    #[error("not a reflection: {0}")]
    NotReflection(String),
    #[error("not dominant regular: {0}")]
    NotDominant(String),
    #[error("truncation overflow: needs L = {needed}, have L = {have}")]
    Truncation { needed: usize, have: usize },
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("not a weight vector: {0}")]
    NotWeightVector(String),
    #[error("vector outside the span: {0}")]
    OutsideSpan(String),
    #[error("identity check failed: {0}")]
    Assertion(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
