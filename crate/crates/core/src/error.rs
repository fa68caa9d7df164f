use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("death rate d[{index}] = {value} lies outside (0, 1]")]
    DeathRateOutOfRange { index: usize, value: f64 },

    #[error("birth rate b[{index}] = {birth} does not exceed death rate {death}")]
    BirthNotExceedDeath {
        index: usize,
        birth: f64,
        death: f64,
    },

    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("kernel parameter {name} = {value} must be positive and finite")]
    NonpositiveKernelParam { name: &'static str, value: f64 },

    #[error("state component x[{index}] = {value} is negative or non-finite")]
    InvalidState { index: usize, value: f64 },

    #[error("non-finite or negative state at step {step}: invalid model/kernel pairing")]
    NonFiniteState { step: usize },

    #[error("strategy index {index} out of range for {len} strategies")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("turnover coefficients of strategies {i} and {j} are tied; analyses require a strict ordering")]
    TiedTurnover { i: usize, j: usize },

    #[error(
        "beta = {beta} is not positive; the first strategy must have the strictly larger turnover"
    )]
    NonpositiveBeta { beta: f64 },

    #[error("no theta > 1 exists for alpha = {alpha}, gamma = {gamma} (requires gamma < 0 and alpha + gamma > 1)")]
    NoTheta { alpha: f64, gamma: f64 },

    #[error("kernel profile has no closed-form inverse")]
    KernelNotInvertible,

    #[error("b1*d[{i}] - b[{i}]*d1 = {value} is not positive; turnover ordering violated")]
    NonpositiveDenominator { i: usize, value: f64 },

    #[error("finite-difference stencil straddles a kernel kink near coordinate {index}")]
    KinkProximity { index: usize },

    #[error("component x[{index}] is not strictly positive at step {step}")]
    NonpositiveComponent { index: usize, step: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
