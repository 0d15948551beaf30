use nalgebra::{DMatrix, DVector};

use super::argmax_lowest;
use crate::error::{Error, Result};

/// Gaussian posterior over θ in precision form.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPosterior {
    /// Σ̂_t⁻¹ = Σ0⁻¹ + σ⁻² Σ_ℓ A_ℓ A_ℓᵀ.
    pub precision: DMatrix<f64>,
    /// Σ0⁻¹ θ0 + σ⁻² Σ_ℓ A_ℓ Y_ℓ.
    pub weighted_sum: DVector<f64>,
    /// θ̂_t.
    pub post_mean: DVector<f64>,
    /// Σ̂_t.
    pub post_cov: DMatrix<f64>,
}

impl LinearPosterior {
    fn refresh(&mut self) -> Result<()> {
        let chol = self.precision.clone().cholesky().ok_or(Error::SingularCovariance)?;
        self.post_mean = chol.solve(&self.weighted_sum);
        let cov = chol.inverse();
        self.post_cov = (&cov + cov.transpose()) * 0.5;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LinearPolicy {
    posterior: LinearPosterior,
    /// K × d, one action per row.
    actions: DMatrix<f64>,
    noise_precision: f64,
    width_scale: f64,
    round: usize,
    means: Vec<f64>,
    variances: Vec<f64>,
    index: Vec<f64>,
}

impl LinearPolicy {
    pub(super) fn new(
        prior_mean: &DVector<f64>,
        prior_cov: &DMatrix<f64>,
        actions: &[DVector<f64>],
        sigma: f64,
        delta: f64,
    ) -> Result<Self> {
        let chol = prior_cov.clone().cholesky().ok_or(Error::SingularCovariance)?;
        let precision = chol.inverse();
        let precision = (&precision + precision.transpose()) * 0.5;
        let weighted_sum = &precision * prior_mean;
        let d = prior_mean.len();
        let k = actions.len();
        let mut policy = Self {
            posterior: LinearPosterior {
                precision,
                weighted_sum,
                post_mean: DVector::zeros(d),
                post_cov: DMatrix::zeros(d, d),
            },
            actions: DMatrix::from_fn(k, d, |i, j| actions[i][j]),
            noise_precision: sigma.powi(-2),
            width_scale: (2.0 * (1.0 / delta).ln()).sqrt(),
            round: 1,
            means: vec![0.0; k],
            variances: vec![0.0; k],
            index: vec![0.0; k],
        };
        policy.refresh()?;
        Ok(policy)
    }

    fn refresh(&mut self) -> Result<()> {
        self.posterior.refresh()?;
        let projected = &self.actions * &self.posterior.post_cov;
        for a in 0..self.actions.nrows() {
            let row = self.actions.row(a);
            self.means[a] = row.dot(&self.posterior.post_mean.transpose());
            self.variances[a] = row.dot(&projected.row(a)).max(0.0);
            self.index[a] = self.means[a] + self.width_scale * self.variances[a].sqrt();
        }
        Ok(())
    }

    pub fn posterior(&self) -> &LinearPosterior {
        &self.posterior
    }

    pub fn num_actions(&self) -> usize {
        self.actions.nrows()
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn mean_estimate(&self, a: usize) -> f64 {
        self.means[a]
    }

    /// ‖a‖²_{Σ̂_t}.
    pub fn action_variance(&self, a: usize) -> f64 {
        self.variances[a]
    }

    /// √(2 log(1/δ)) ‖a‖_{Σ̂_t}.
    pub fn width(&self, a: usize) -> f64 {
        self.width_scale * self.variances[a].sqrt()
    }

    pub(super) fn ucb_index(&self, a: usize) -> f64 {
        self.index[a]
    }

    pub fn select_action(&self) -> usize {
        argmax_lowest(&self.index)
    }

    pub(super) fn update(&mut self, a: usize, reward: f64) -> Result<()> {
        let x = self.actions.row(a).transpose();
        self.posterior.precision.ger(self.noise_precision, &x, &x, 1.0);
        self.posterior.weighted_sum.axpy(self.noise_precision * reward, &x, 1.0);
        self.refresh()?;
        self.round += 1;
        Ok(())
    }
}
