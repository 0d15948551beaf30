//! Priors, action sets, sampled bandit instances and their gaps.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::error::{ensure_positive, invalid, Error, Result};
use crate::linalg;
use crate::rng::RngStream;

/// Prior distribution over the model parameter θ.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    /// θ_a ~ N(means[a], sigma0²) independently.
    GaussianKArmed { means: Vec<f64>, sigma0: f64 },
    /// θ_a ~ Beta(alpha[a], beta[a]) independently.
    BetaPerArm { alpha: Vec<f64>, beta: Vec<f64> },
    /// θ ~ N(mean, cov) in d dimensions.
    LinearGaussian { mean: DVector<f64>, cov: DMatrix<f64> },
}

impl Prior {
    pub fn gaussian(means: Vec<f64>, sigma0: f64) -> Result<Self> {
        let prior = Prior::GaussianKArmed { means, sigma0 };
        prior.validate()?;
        Ok(prior)
    }

    pub fn beta(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let prior = Prior::BetaPerArm { alpha, beta };
        prior.validate()?;
        Ok(prior)
    }

    /// The covariance is symmetrized on construction.
    pub fn linear(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let cov = if cov.is_square() { linalg::symmetrize(&cov) } else { cov };
        let prior = Prior::LinearGaussian { mean, cov };
        prior.validate()?;
        Ok(prior)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Prior::GaussianKArmed { .. } => "Gaussian",
            Prior::BetaPerArm { .. } => "Beta",
            Prior::LinearGaussian { .. } => "linear Gaussian",
        }
    }

    /// Length of θ.
    pub fn dim(&self) -> usize {
        match self {
            Prior::GaussianKArmed { means, .. } => means.len(),
            Prior::BetaPerArm { alpha, .. } => alpha.len(),
            Prior::LinearGaussian { mean, .. } => mean.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Prior::GaussianKArmed { means, sigma0 } => {
                if means.is_empty() {
                    return Err(invalid("means", "need at least one arm"));
                }
                if means.iter().any(|m| !m.is_finite()) {
                    return Err(invalid("means", "entries must be finite"));
                }
                ensure_positive("sigma0", *sigma0)
            }
            Prior::BetaPerArm { alpha, beta } => {
                if alpha.is_empty() || alpha.len() != beta.len() {
                    return Err(invalid("alpha/beta", "need equal, non-zero lengths"));
                }
                for (&a, &b) in alpha.iter().zip(beta) {
                    ensure_positive("alpha", a)?;
                    ensure_positive("beta", b)?;
                }
                Ok(())
            }
            Prior::LinearGaussian { mean, cov } => {
                if mean.is_empty() {
                    return Err(invalid("theta0", "dimension must be >= 1"));
                }
                if cov.nrows() != mean.len() || cov.ncols() != mean.len() {
                    return Err(invalid("cov", "must be d x d"));
                }
                if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
                    return Err(invalid("linear prior", "entries must be finite"));
                }
                linalg::psd_eigen(cov).map(|_| ())
            }
        }
    }
}

/// Set of actions available to the learner.
#[derive(Debug, Clone, PartialEq)]
pub enum ActionSet {
    /// Arms `0..num_actions`; the mean of arm `a` is θ_a.
    Indexed { num_actions: usize },
    /// Feature vectors; the mean of action `a` is aᵀθ. Every vector has norm ≤ `norm_bound`.
    Featurized {
        vectors: Vec<DVector<f64>>,
        norm_bound: f64,
    },
}

impl ActionSet {
    pub fn indexed(num_actions: usize) -> Result<Self> {
        if num_actions == 0 {
            return Err(invalid("K", "need at least one action"));
        }
        Ok(ActionSet::Indexed { num_actions })
    }

    pub fn featurized(vectors: Vec<DVector<f64>>, norm_bound: f64) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(invalid("actions", "need at least one action"));
        };
        let d = first.len();
        if d == 0 {
            return Err(invalid("actions", "dimension must be >= 1"));
        }
        ensure_positive("L", norm_bound)?;
        for v in &vectors {
            if v.len() != d {
                return Err(invalid("actions", "all vectors must share one dimension"));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(invalid("actions", "entries must be finite"));
            }
            if v.norm() > norm_bound * (1.0 + 1e-12) {
                return Err(invalid("actions", format!("norm {} exceeds L = {norm_bound}", v.norm())));
            }
        }
        Ok(ActionSet::Featurized { vectors, norm_bound })
    }

    /// Canonical basis e_1..e_d as a featurized set with L = 1.
    pub fn canonical_basis(d: usize) -> Result<Self> {
        let vectors = (0..d)
            .map(|i| DVector::from_fn(d, |j, _| if i == j { 1.0 } else { 0.0 }))
            .collect();
        Self::featurized(vectors, 1.0)
    }

    pub fn len(&self) -> usize {
        match self {
            ActionSet::Indexed { num_actions } => *num_actions,
            ActionSet::Featurized { vectors, .. } => vectors.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ActionSet::Indexed { .. } => "indexed",
            ActionSet::Featurized { .. } => "featurized",
        }
    }

    /// Mean rewards of every action under parameter θ.
    pub fn means(&self, theta: &[f64]) -> Vec<f64> {
        match self {
            ActionSet::Indexed { .. } => theta.to_vec(),
            ActionSet::Featurized { vectors, .. } => vectors
                .iter()
                .map(|a| a.iter().zip(theta).map(|(x, t)| x * t).sum())
                .collect(),
        }
    }

    fn compatible_with(&self, prior: &Prior) -> Result<()> {
        let ok = match (prior, self) {
            (Prior::GaussianKArmed { .. } | Prior::BetaPerArm { .. }, ActionSet::Indexed { num_actions }) => {
                *num_actions == prior.dim()
            }
            (Prior::LinearGaussian { mean, .. }, ActionSet::Featurized { vectors, .. }) => {
                vectors[0].len() == mean.len()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IncompatiblePrior {
                prior: prior.kind(),
                action_set: self.kind(),
            })
        }
    }
}

/// Suboptimality gaps of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    pub gaps: Vec<f64>,
    /// Smallest gap among non-optimal actions; +∞ when there is a single action.
    pub min_gap: f64,
    pub optimal_index: usize,
}

/// Index of the largest value, lowest index on exact ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl GapProfile {
    pub fn from_means(means: &[f64]) -> Self {
        let optimal_index = argmax(means);
        let best = means[optimal_index];
        let gaps: Vec<f64> = means.iter().map(|m| best - m).collect();
        let min_gap = gaps
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != optimal_index)
            .map(|(_, g)| *g)
            .fold(f64::INFINITY, f64::min);
        GapProfile {
            gaps,
            min_gap,
            optimal_index,
        }
    }
}

/// A sampled model parameter bound to its action set.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    theta: Vec<f64>,
    action_set: ActionSet,
    means: Vec<f64>,
}

impl BanditInstance {
    pub fn new(theta: Vec<f64>, action_set: ActionSet) -> Result<Self> {
        let expected = match &action_set {
            ActionSet::Indexed { num_actions } => *num_actions,
            ActionSet::Featurized { vectors, .. } => vectors[0].len(),
        };
        if theta.len() != expected {
            return Err(invalid("theta", format!("expected {expected} entries, got {}", theta.len())));
        }
        let means = action_set.means(&theta);
        if means.iter().any(|m| !m.is_finite()) {
            return Err(invalid("theta", "mean rewards must be finite"));
        }
        Ok(Self {
            theta,
            action_set,
            means,
        })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn action_set(&self) -> &ActionSet {
        &self.action_set
    }

    pub fn num_actions(&self) -> usize {
        self.means.len()
    }

    pub fn mean_reward(&self, action: usize) -> Result<f64> {
        self.means.get(action).copied().ok_or(Error::ActionOutOfRange {
            action,
            num_actions: self.means.len(),
        })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn optimal_action(&self) -> usize {
        argmax(&self.means)
    }

    pub fn gap_profile(&self) -> GapProfile {
        GapProfile::from_means(&self.means)
    }
}

/// Δ^ε = max(Δ, ε).
pub fn clip_gap(delta: f64, epsilon: f64) -> Result<f64> {
    // also rejects NaN
    if delta.is_nan() || delta < 0.0 {
        return Err(invalid("delta", format!("gap must be >= 0, got {delta}")));
    }
    ensure_positive("epsilon", epsilon)?;
    Ok(delta.max(epsilon))
}

/// Draws θ from a prior. Holds the covariance square root for the linear case
/// so repeated draws do not refactorize.
#[derive(Debug, Clone)]
pub struct PriorSampler {
    prior: Prior,
    cov_sqrt: Option<DMatrix<f64>>,
}

impl PriorSampler {
    pub fn new(prior: &Prior) -> Result<Self> {
        prior.validate()?;
        let cov_sqrt = match prior {
            Prior::LinearGaussian { cov, .. } => Some(linalg::psd_sqrt(cov)?),
            _ => None,
        };
        Ok(Self {
            prior: prior.clone(),
            cov_sqrt,
        })
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.prior.dim());
        self.sample_into(rng, &mut out);
        out
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<f64>) {
        out.clear();
        match &self.prior {
            Prior::GaussianKArmed { means, sigma0 } => {
                out.extend(means.iter().map(|m| {
                    let z: f64 = StandardNormal.sample(rng);
                    m + sigma0 * z
                }));
            }
            Prior::BetaPerArm { alpha, beta } => {
                out.extend(alpha.iter().zip(beta).map(|(&a, &b)| {
                    // parameters were validated as positive
                    Beta::new(a, b).expect("valid Beta parameters").sample(rng)
                }));
            }
            Prior::LinearGaussian { mean, .. } => {
                let root = self.cov_sqrt.as_ref().expect("linear prior has a square root");
                let z = DVector::from_fn(mean.len(), |_, _| StandardNormal.sample(rng));
                let theta = mean + root * z;
                out.extend(theta.iter());
            }
        }
    }
}

/// Draws a bandit instance θ ~ prior on the given action set.
pub fn sample_instance(prior: &Prior, action_set: &ActionSet, stream: &RngStream) -> Result<BanditInstance> {
    action_set.compatible_with(prior)?;
    let sampler = PriorSampler::new(prior)?;
    let theta = sampler.sample(&mut stream.rng());
    BanditInstance::new(theta, action_set.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn clip_gap_examples() {
        assert_eq!(clip_gap(0.5, 0.001).unwrap(), 0.5);
        assert_eq!(clip_gap(0.0, 0.001).unwrap(), 0.001);
        assert_eq!(clip_gap(0.001, 0.001).unwrap(), 0.001);
        assert!(clip_gap(-0.1, 0.001).is_err());
        assert!(clip_gap(0.1, 0.0).is_err());
        assert!(clip_gap(0.1, -1.0).is_err());
    }

    #[test]
    fn gap_profile_examples() {
        let inst = BanditInstance::new(vec![1.0, 0.0, 0.0], ActionSet::indexed(3).unwrap()).unwrap();
        let g = inst.gap_profile();
        assert_eq!(g.gaps, vec![0.0, 1.0, 1.0]);
        assert_eq!(g.min_gap, 1.0);
        assert_eq!(g.optimal_index, 0);

        let tie = BanditInstance::new(vec![0.3, 0.3], ActionSet::indexed(2).unwrap()).unwrap();
        let g = tie.gap_profile();
        assert_eq!(g.gaps, vec![0.0, 0.0]);
        assert_eq!(g.optimal_index, 0);
        assert_eq!(g.min_gap, 0.0);

        let lin = BanditInstance::new(vec![1.0, -1.0], ActionSet::canonical_basis(2).unwrap()).unwrap();
        assert_eq!(lin.gap_profile().gaps, vec![0.0, 2.0]);
    }

    #[test]
    fn single_arm_min_gap_is_infinite() {
        let inst = BanditInstance::new(vec![0.2], ActionSet::indexed(1).unwrap()).unwrap();
        assert_eq!(inst.gap_profile().min_gap, f64::INFINITY);
    }

    #[test]
    fn degenerate_gaussian_prior_returns_means() {
        let prior = Prior::gaussian(vec![0.5, -1.25, 3.0], 1e-30).unwrap();
        let inst = sample_instance(&prior, &ActionSet::indexed(3).unwrap(), &RngStream::new(1, 2)).unwrap();
        assert_eq!(inst.theta(), &[0.5, -1.25, 3.0]);
    }

    #[test]
    fn zero_covariance_linear_prior_returns_mean() {
        let mean = DVector::from_vec(vec![0.3, -0.7]);
        let prior = Prior::linear(mean.clone(), DMatrix::zeros(2, 2)).unwrap();
        let inst = sample_instance(&prior, &ActionSet::canonical_basis(2).unwrap(), &RngStream::new(1, 2)).unwrap();
        assert_eq!(inst.theta(), mean.as_slice());
    }

    #[test]
    fn incompatible_pairings_rejected() {
        let g = Prior::gaussian(vec![0.0; 2], 1.0).unwrap();
        let basis = ActionSet::canonical_basis(2).unwrap();
        assert!(matches!(
            sample_instance(&g, &basis, &RngStream::new(0, 0)),
            Err(Error::IncompatiblePrior { .. })
        ));
        let lin = Prior::linear(DVector::zeros(2), DMatrix::identity(2, 2)).unwrap();
        assert!(sample_instance(&lin, &ActionSet::indexed(2).unwrap(), &RngStream::new(0, 0)).is_err());
        assert!(sample_instance(&g, &ActionSet::indexed(3).unwrap(), &RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn invalid_priors_rejected() {
        assert!(Prior::gaussian(vec![0.0], 0.0).is_err());
        assert!(Prior::beta(vec![1.0], vec![0.0]).is_err());
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            Prior::linear(DVector::zeros(2), indefinite),
            Err(Error::NotPositiveSemiDefinite { .. })
        ));
    }

    #[test]
    fn featurized_norm_bound_enforced() {
        let v = vec![DVector::from_vec(vec![3.0, 4.0])];
        assert!(ActionSet::featurized(v.clone(), 4.9).is_err());
        assert!(ActionSet::featurized(v, 5.0).is_ok());
    }

    #[test]
    fn sampling_is_reproducible() {
        let prior = Prior::gaussian(vec![0.0; 5], 1.0).unwrap();
        let set = ActionSet::indexed(5).unwrap();
        let a = sample_instance(&prior, &set, &RngStream::new(9, 4)).unwrap();
        let b = sample_instance(&prior, &set, &RngStream::new(9, 4)).unwrap();
        assert_eq!(a.theta(), b.theta());
        let c = sample_instance(&prior, &set, &RngStream::new(9, 5)).unwrap();
        assert_ne!(a.theta(), c.theta());
    }

    #[test]
    fn beta_instances_lie_in_unit_interval() {
        let prior = Prior::beta(vec![0.5, 2.0, 1.0], vec![0.5, 1.0, 3.0]).unwrap();
        let set = ActionSet::indexed(3).unwrap();
        for r in 0..200 {
            let inst = sample_instance(&prior, &set, &RngStream::new(3, r)).unwrap();
            assert!(inst.theta().iter().all(|t| (0.0..=1.0).contains(t)));
        }
    }

    #[test]
    fn linear_means_are_dot_products() {
        let set = ActionSet::featurized(
            vec![DVector::from_vec(vec![0.6, 0.8]), DVector::from_vec(vec![1.0, 0.0])],
            1.0,
        )
        .unwrap();
        let inst = BanditInstance::new(vec![2.0, -1.0], set).unwrap();
        assert_relative_eq!(inst.mean_reward(0).unwrap(), 0.4, epsilon = 1e-15);
        assert_eq!(inst.mean_reward(1).unwrap(), 2.0);
        assert_eq!(inst.optimal_action(), 1);
        assert!(inst.mean_reward(2).is_err());
    }
}
