use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid discretization: step {0} is not of the form 1/n")]
    InvalidDiscretization(f64),
    #[error("empty action space: {arms} arms do not fit on a grid with {levels} levels")]
    EmptyActionSpace { arms: usize, levels: u32 },
    #[error("invalid meta arm: {0}")]
    InvalidMetaArm(String),
    #[error("dimension mismatch: expected {expected} arms, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input {0} outside [0, 1]")]
    OutOfDomain(f64),
    #[error("infeasible instance: {0}")]
    InfeasibleInstance(String),
    #[error("invalid reward model: {0}")]
    InvalidModel(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("invalid horizon {0}: need at least 2 rounds")]
    InvalidHorizon(u64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("slope undefined: {0}")]
    SlopeUndefined(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
