//! BayesUCB (Gaussian, Bernoulli, linear) and UCB1.
//!
//! Each policy keeps conjugate posterior statistics, exposes the upper
//! confidence bound `U_a = μ_a(θ̂) + C_a` of every action and pulls the argmax
//! (lowest index on ties). UCB1 is the Gaussian policy in the σ0 → ∞ limit
//! with every arm forced once at the start.

mod bernoulli;
mod gaussian;
mod linear;

pub use bernoulli::{BernoulliPolicy, BetaArmPosterior};
pub use gaussian::{GaussianArmPosterior, GaussianPolicy};
pub use linear::{LinearPolicy, LinearPosterior};

use crate::error::{ensure_positive, ensure_probability, Error, Result};
use crate::model::{ActionSet, BanditInstance, Prior};

/// Which algorithm a [`PolicyConfig`] builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyVariant {
    BayesUcbGaussian,
    BayesUcbBernoulli,
    BayesUcbLinear,
    Ucb1,
}

impl PolicyVariant {
    pub fn name(&self) -> &'static str {
        match self {
            PolicyVariant::BayesUcbGaussian | PolicyVariant::BayesUcbBernoulli | PolicyVariant::BayesUcbLinear => {
                "BayesUCB"
            }
            PolicyVariant::Ucb1 => "UCB1",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyConfig {
    pub variant: PolicyVariant,
    /// Failure probability of each confidence interval.
    pub delta: f64,
    /// Reward noise scale assumed by the policy (sub-Gaussian proxy for UCB1).
    pub sigma: f64,
    /// Absent for UCB1.
    pub prior: Option<Prior>,
}

impl PolicyConfig {
    /// BayesUCB matched to the prior family.
    pub fn bayes_ucb(prior: Prior, sigma: f64, delta: f64) -> Result<Self> {
        let variant = match prior {
            Prior::GaussianKArmed { .. } => PolicyVariant::BayesUcbGaussian,
            Prior::BetaPerArm { .. } => PolicyVariant::BayesUcbBernoulli,
            Prior::LinearGaussian { .. } => PolicyVariant::BayesUcbLinear,
        };
        let config = Self {
            variant,
            delta,
            sigma,
            prior: Some(prior),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn ucb1(sigma: f64, delta: f64) -> Result<Self> {
        let config = Self {
            variant: PolicyVariant::Ucb1,
            delta,
            sigma,
            prior: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_probability("delta", self.delta)?;
        if self.variant != PolicyVariant::BayesUcbBernoulli {
            ensure_positive("sigma", self.sigma)?;
        }
        let prior_ok = matches!(
            (self.variant, &self.prior),
            (PolicyVariant::BayesUcbGaussian, Some(Prior::GaussianKArmed { .. }))
                | (PolicyVariant::BayesUcbBernoulli, Some(Prior::BetaPerArm { .. }))
                | (PolicyVariant::BayesUcbLinear, Some(Prior::LinearGaussian { .. }))
                | (PolicyVariant::Ucb1, None)
        );
        if !prior_ok {
            return Err(Error::InvalidParameter {
                name: "prior",
                reason: format!("{:?} does not accept this prior", self.variant),
            });
        }
        if let Some(prior) = &self.prior {
            prior.validate()?;
        }
        Ok(())
    }

    /// Fresh state at round 1 (empty history).
    pub fn init(&self, action_set: &ActionSet) -> Result<PolicyState> {
        self.validate()?;
        let mismatch = || Error::IncompatiblePrior {
            prior: self.prior.as_ref().map_or("UCB1", Prior::kind),
            action_set: action_set.kind(),
        };
        Ok(match (self.variant, &self.prior, action_set) {
            (PolicyVariant::BayesUcbGaussian, Some(Prior::GaussianKArmed { means, sigma0 }), ActionSet::Indexed { num_actions }) => {
                if means.len() != *num_actions {
                    return Err(mismatch());
                }
                PolicyState::Gaussian(GaussianPolicy::bayes(means.clone(), *sigma0, self.sigma, self.delta))
            }
            (PolicyVariant::Ucb1, None, ActionSet::Indexed { num_actions }) => {
                PolicyState::Gaussian(GaussianPolicy::ucb1(*num_actions, self.sigma, self.delta))
            }
            (PolicyVariant::BayesUcbBernoulli, Some(Prior::BetaPerArm { alpha, beta }), ActionSet::Indexed { num_actions }) => {
                if alpha.len() != *num_actions {
                    return Err(mismatch());
                }
                PolicyState::Bernoulli(BernoulliPolicy::new(alpha, beta, self.delta))
            }
            (PolicyVariant::BayesUcbLinear, Some(Prior::LinearGaussian { mean, cov }), ActionSet::Featurized { vectors, .. }) => {
                if vectors[0].len() != mean.len() {
                    return Err(mismatch());
                }
                PolicyState::Linear(LinearPolicy::new(mean, cov, vectors, self.sigma, self.delta)?)
            }
            _ => return Err(mismatch()),
        })
    }
}

/// Mutable per-run policy state.
#[derive(Debug, Clone)]
pub enum PolicyState {
    Gaussian(GaussianPolicy),
    Bernoulli(BernoulliPolicy),
    Linear(LinearPolicy),
}

impl PolicyState {
    pub fn num_actions(&self) -> usize {
        match self {
            PolicyState::Gaussian(p) => p.num_actions(),
            PolicyState::Bernoulli(p) => p.num_actions(),
            PolicyState::Linear(p) => p.num_actions(),
        }
    }

    /// Current round t (1-based): the history holds t - 1 observations.
    pub fn round(&self) -> usize {
        match self {
            PolicyState::Gaussian(p) => p.round(),
            PolicyState::Bernoulli(p) => p.round(),
            PolicyState::Linear(p) => p.round(),
        }
    }

    fn check(&self, action: usize) -> Result<()> {
        let num_actions = self.num_actions();
        if action < num_actions {
            Ok(())
        } else {
            Err(Error::ActionOutOfRange { action, num_actions })
        }
    }

    /// U_{t,a} = μ_a(θ̂_t) + C_{t,a}.
    pub fn ucb_index(&self, action: usize) -> Result<f64> {
        self.check(action)?;
        match self {
            PolicyState::Gaussian(p) => p.ucb_index(action),
            PolicyState::Bernoulli(p) => Ok(p.ucb_index(action)),
            PolicyState::Linear(p) => Ok(p.ucb_index(action)),
        }
    }

    /// Posterior (or sample) mean reward μ_a(θ̂_t).
    pub fn mean_estimate(&self, action: usize) -> f64 {
        match self {
            PolicyState::Gaussian(p) => p.arms()[action].post_mean,
            PolicyState::Bernoulli(p) => p.arms()[action].mean(),
            PolicyState::Linear(p) => p.mean_estimate(action),
        }
    }

    /// Confidence width C_{t,a}; +∞ for an unpulled UCB1 arm.
    pub fn width(&self, action: usize) -> f64 {
        match self {
            PolicyState::Gaussian(p) => p.width(action),
            PolicyState::Bernoulli(p) => p.width(action),
            PolicyState::Linear(p) => p.width(action),
        }
    }

    /// Posterior variance of μ_a: σ̂²_{t,a} for K-armed Gaussian,
    /// ‖a‖²_{Σ̂_t} for linear, the Beta variance for Bernoulli.
    pub fn action_variance(&self, action: usize) -> f64 {
        match self {
            PolicyState::Gaussian(p) => p.arms()[action].post_var,
            PolicyState::Bernoulli(p) => p.arms()[action].variance(),
            PolicyState::Linear(p) => p.action_variance(action),
        }
    }

    /// A_t = argmax_a U_{t,a}; UCB1 takes arm t at rounds t ≤ K.
    pub fn select_action(&self) -> usize {
        match self {
            PolicyState::Gaussian(p) => p.select_action(),
            PolicyState::Bernoulli(p) => p.select_action(),
            PolicyState::Linear(p) => p.select_action(),
        }
    }

    /// Adds (action, reward) to the history.
    pub fn update(&mut self, action: usize, reward: f64) -> Result<()> {
        self.check(action)?;
        if !reward.is_finite() {
            return Err(Error::InvalidParameter {
                name: "reward",
                reason: format!("must be finite, got {reward}"),
            });
        }
        match self {
            PolicyState::Gaussian(p) => {
                p.update(action, reward);
                Ok(())
            }
            PolicyState::Bernoulli(p) => p.update(action, reward),
            PolicyState::Linear(p) => p.update(action, reward),
        }
    }
}

/// Whether every confidence interval contains the true mean:
/// |μ_a(θ) − μ_a(θ̂_t)| ≤ C_{t,a} for all a. Diagnostic only; policies never see θ.
pub fn confidence_event_holds(state: &PolicyState, instance: &BanditInstance) -> bool {
    (0..state.num_actions()).all(|a| {
        let truth = instance.means()[a];
        let width = state.width(a);
        width == f64::INFINITY || (truth - state.mean_estimate(a)).abs() <= width
    })
}

pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    crate::model::argmax(values)
}
