use super::argmax_lowest;
use crate::error::{Error, Result};

/// Beta(α_{t,a}, β_{t,a}) posterior of one Bernoulli arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaArmPosterior {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaArmPosterior {
    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn variance(&self) -> f64 {
        let s = self.alpha + self.beta;
        self.alpha * self.beta / (s * s * (s + 1.0))
    }
}

#[derive(Debug, Clone)]
pub struct BernoulliPolicy {
    arms: Vec<BetaArmPosterior>,
    log_inv_delta: f64,
    round: usize,
    index: Vec<f64>,
}

impl BernoulliPolicy {
    pub(super) fn new(alpha: &[f64], beta: &[f64], delta: f64) -> Self {
        let arms: Vec<_> = alpha
            .iter()
            .zip(beta)
            .map(|(&alpha, &beta)| BetaArmPosterior { alpha, beta })
            .collect();
        let mut policy = Self {
            index: vec![0.0; arms.len()],
            arms,
            log_inv_delta: (1.0 / delta).ln(),
            round: 1,
        };
        for a in 0..policy.arms.len() {
            policy.index[a] = policy.ucb_index(a);
        }
        policy
    }

    pub fn arms(&self) -> &[BetaArmPosterior] {
        &self.arms
    }

    pub fn num_actions(&self) -> usize {
        self.arms.len()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// √(log(1/δ) / (2 (α_{t,a} + β_{t,a} + 1))), from the Beta sub-Gaussian variance proxy.
    pub fn width(&self, a: usize) -> f64 {
        let arm = &self.arms[a];
        (self.log_inv_delta / (2.0 * (arm.alpha + arm.beta + 1.0))).sqrt()
    }

    pub(super) fn ucb_index(&self, a: usize) -> f64 {
        self.arms[a].mean() + self.width(a)
    }

    pub fn select_action(&self) -> usize {
        argmax_lowest(&self.index)
    }

    pub(super) fn update(&mut self, a: usize, reward: f64) -> Result<()> {
        if reward == 1.0 {
            self.arms[a].alpha += 1.0;
        } else if reward == 0.0 {
            self.arms[a].beta += 1.0;
        } else {
            return Err(Error::NonBinaryReward(reward));
        }
        self.index[a] = self.ucb_index(a);
        self.round += 1;
        Ok(())
    }
}
