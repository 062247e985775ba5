//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,
    #[error("cyclotomic order {0} exceeds the configured cap {1}")]
    OrderTooLarge(u64, u64),
    #[error("insufficient coset precision: have {have}, need {need}")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error("Euler factor has a pole at the evaluation point")]
    PoleAtEvaluationPoint,
    #[error("geometric tail has ratio 1 (divergent / indeterminate continuation)")]
    RatioOne,
    #[error("central characters are inconsistent: chi restricted to F^x must equal omega^{{-1}}")]
    InconsistentCentralCharacter,
    #[error("level r = {got} is below the stabilization threshold r0 = {need}")]
    InsufficientLevel { got: u32, need: u32 },
    #[error("ordinary projector did not converge after {iters} iterations; residual norms {trajectory:?}")]
    NoConvergence { iters: u32, trajectory: Vec<String> },
    #[error("{0} is not represented by the quadratic space")]
    NotRepresented(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("witness search bound {0} is too small; need at least {1}")]
    BoundTooSmall(u64, u64),
    #[error("missing local datum for prime {0}")]
    MissingLocalDatum(u64),
    #[error("bad place for this operator: {0}")]
    BadPlace(String),
    #[error("invalid descriptor: {0}")]
    BadDescriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
