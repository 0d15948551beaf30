use thiserror::Error;

/// Errors raised by model construction, policies, bounds and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("prior {prior} is not compatible with {action_set} action set")]
    IncompatiblePrior {
        prior: &'static str,
        action_set: &'static str,
    },

    #[error("covariance matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemiDefinite { min_eigenvalue: f64 },

    #[error("covariance matrix is singular; the posterior needs an invertible prior covariance")]
    SingularCovariance,

    #[error("action {action} out of range for {num_actions} actions")]
    ActionOutOfRange { action: usize, num_actions: usize },

    #[error("Bernoulli mean {mean} of action {action} lies outside [0, 1]")]
    MeanOutOfUnitInterval { action: usize, mean: f64 },

    #[error("Bernoulli reward must be 0 or 1, got {0}")]
    NonBinaryReward(f64),

    #[error("UCB index of action {0} is undefined before it has been pulled")]
    UndefinedIndex(usize),

    #[error("{bound} precondition violated: {reason}")]
    Precondition { bound: &'static str, reason: String },

    #[error("{0} requires a {1}")]
    Unsupported(&'static str, &'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_probability(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in (0, 1), got {value}")))
    }
}
