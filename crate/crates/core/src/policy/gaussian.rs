use super::argmax_lowest;

/// Sufficient statistics and posterior of one Gaussian arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianArmPosterior {
    pub n_pulls: u64,
    pub sum_rewards: f64,
    /// θ̂_{t,a}; NaN for an unpulled arm under a flat prior.
    pub post_mean: f64,
    /// σ̂²_{t,a} = 1 / (σ0⁻² + σ⁻² N_{t,a}); +∞ for an unpulled arm under a flat prior.
    pub post_var: f64,
}

/// K-armed Gaussian BayesUCB, or UCB1 when the prior precision is zero.
#[derive(Debug, Clone)]
pub struct GaussianPolicy {
    arms: Vec<GaussianArmPosterior>,
    prior_means: Vec<f64>,
    prior_precision: f64,
    noise_precision: f64,
    width_scale: f64,
    forced_init: bool,
    round: usize,
    index: Vec<f64>,
}

impl GaussianPolicy {
    pub(super) fn bayes(prior_means: Vec<f64>, sigma0: f64, sigma: f64, delta: f64) -> Self {
        Self::build(prior_means, sigma0.powi(-2), sigma, delta, false)
    }

    pub(super) fn ucb1(num_actions: usize, sigma: f64, delta: f64) -> Self {
        Self::build(vec![0.0; num_actions], 0.0, sigma, delta, true)
    }

    fn build(prior_means: Vec<f64>, prior_precision: f64, sigma: f64, delta: f64, forced_init: bool) -> Self {
        let mut policy = Self {
            arms: Vec::with_capacity(prior_means.len()),
            prior_precision,
            noise_precision: sigma.powi(-2),
            width_scale: (2.0 * (1.0 / delta).ln()).sqrt(),
            forced_init,
            round: 1,
            index: vec![0.0; prior_means.len()],
            prior_means,
        };
        for a in 0..policy.prior_means.len() {
            let arm = policy.posterior(a, 0, 0.0);
            policy.arms.push(arm);
            policy.index[a] = policy.cached_index(a);
        }
        policy
    }

    fn posterior(&self, a: usize, n_pulls: u64, sum_rewards: f64) -> GaussianArmPosterior {
        let precision = self.prior_precision + self.noise_precision * n_pulls as f64;
        let post_var = 1.0 / precision;
        let post_mean = if precision > 0.0 {
            post_var * (self.prior_precision * self.prior_means[a] + self.noise_precision * sum_rewards)
        } else {
            f64::NAN
        };
        GaussianArmPosterior {
            n_pulls,
            sum_rewards,
            post_mean,
            post_var,
        }
    }

    fn cached_index(&self, a: usize) -> f64 {
        let arm = &self.arms[a];
        if arm.post_var.is_finite() {
            arm.post_mean + self.width_scale * arm.post_var.sqrt()
        } else {
            f64::INFINITY
        }
    }

    pub fn arms(&self) -> &[GaussianArmPosterior] {
        &self.arms
    }

    pub fn num_actions(&self) -> usize {
        self.arms.len()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn is_ucb1(&self) -> bool {
        self.forced_init
    }

    pub fn width(&self, a: usize) -> f64 {
        self.width_scale * self.arms[a].post_var.sqrt()
    }

    pub(super) fn ucb_index(&self, a: usize) -> crate::Result<f64> {
        if self.arms[a].post_var.is_finite() {
            Ok(self.index[a])
        } else {
            Err(crate::Error::UndefinedIndex(a))
        }
    }

    pub fn select_action(&self) -> usize {
        if self.forced_init && self.round <= self.arms.len() {
            return self.round - 1;
        }
        argmax_lowest(&self.index)
    }

    pub(super) fn update(&mut self, a: usize, reward: f64) {
        let arm = self.arms[a];
        self.arms[a] = self.posterior(a, arm.n_pulls + 1, arm.sum_rewards + reward);
        self.index[a] = self.cached_index(a);
        self.round += 1;
    }
}
