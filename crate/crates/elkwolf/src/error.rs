//! Error type shared across the library.

use thiserror::Error;

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter failed validation.
    #[error("parameter {name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// A parameter name is not one of the model's eleven.
    #[error("unknown parameter name: {0}")]
    UnknownParameter(String),
    /// An operation precondition was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    /// An operation required an equilibrium that does not exist.
    #[error("{kind} equilibrium does not exist for these parameters")]
    NonExistentEquilibrium { kind: &'static str },
    /// The adaptive step size collapsed below machine resolution.
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    /// The integrator exhausted its step budget before reaching the horizon.
    #[error("step limit reached at t = {t}")]
    StepLimitExceeded { t: f64 },
    /// A trajectory left the nonnegative region by more than the allowed
    /// floor, which signals solver misconfiguration for this model.
    #[error("positivity violation at t = {t}: state component {component} = {value}")]
    PositivityViolation {
        t: f64,
        component: usize,
        value: f64,
    },
    /// Too few samples survive for the requested attractor analysis.
    #[error("orbit too short: {retained} retained samples, need at least 3")]
    OrbitTooShort { retained: usize },
    /// Sample count too small for the partial-correlation t statistic.
    #[error("{n_samples} samples cannot support {n_parameters} parameters: need n > k + 2")]
    DegreesOfFreedom {
        n_samples: usize,
        n_parameters: usize,
    },
    /// Correlation with a constant output is undefined.
    #[error("output vector has zero rank variance")]
    ConstantOutput,
    /// Rank columns are collinear; the partial regression is singular.
    #[error("singular rank regression")]
    SingularRegression,
    /// A rendering or reduction operation received nothing to work on.
    #[error("empty data: {0}")]
    EmptyData(&'static str),
}
