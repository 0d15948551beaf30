//! Reward generators bound to a sampled instance.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{ensure_positive, invalid, Error, Result};
use crate::model::{ActionSet, BanditInstance};
use crate::rng::RngStream;

/// Reward noise around the mean reward μ_a(θ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// μ_a + N(0, σ²) on an indexed action set.
    Gaussian { sigma: f64 },
    /// Bernoulli(θ_a) on an indexed action set.
    Bernoulli,
    /// aᵀθ + N(0, σ²) on a featurized action set.
    LinearGaussian { sigma: f64 },
    /// μ_a ± σ with probability 1/2 each.
    Rademacher { sigma: f64 },
}

impl NoiseModel {
    pub fn sigma(&self) -> Option<f64> {
        match *self {
            NoiseModel::Gaussian { sigma }
            | NoiseModel::LinearGaussian { sigma }
            | NoiseModel::Rademacher { sigma } => Some(sigma),
            NoiseModel::Bernoulli => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::Gaussian { .. } => "gaussian",
            NoiseModel::Bernoulli => "bernoulli",
            NoiseModel::LinearGaussian { .. } => "linear_gaussian",
            NoiseModel::Rademacher { .. } => "rademacher",
        }
    }

    /// Draws one reward with mean `mean`.
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, mean: f64, rng: &mut R) -> f64 {
        match *self {
            NoiseModel::Gaussian { sigma } | NoiseModel::LinearGaussian { sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + sigma * z
            }
            NoiseModel::Bernoulli => {
                if rng.random::<f64>() < mean {
                    1.0
                } else {
                    0.0
                }
            }
            NoiseModel::Rademacher { sigma } => {
                if rng.random::<bool>() {
                    mean + sigma
                } else {
                    mean - sigma
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    noise: NoiseModel,
    instance: BanditInstance,
}

impl Environment {
    pub fn new(noise: NoiseModel, instance: BanditInstance) -> Result<Self> {
        if let Some(sigma) = noise.sigma() {
            ensure_positive("sigma", sigma)?;
        }
        match (noise, instance.action_set()) {
            (NoiseModel::Gaussian { .. } | NoiseModel::Bernoulli, ActionSet::Featurized { .. }) => {
                return Err(Error::Unsupported("indexed reward model", "indexed action set"));
            }
            (NoiseModel::LinearGaussian { .. }, ActionSet::Indexed { .. }) => {
                return Err(Error::Unsupported("linear reward model", "featurized action set"));
            }
            _ => {}
        }
        if noise == NoiseModel::Bernoulli {
            for (action, &mean) in instance.means().iter().enumerate() {
                if !(0.0..=1.0).contains(&mean) {
                    return Err(Error::MeanOutOfUnitInterval { action, mean });
                }
            }
        }
        Ok(Self { noise, instance })
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn instance(&self) -> &BanditInstance {
        &self.instance
    }

    /// Y ~ p_a(·; θ).
    #[inline]
    pub fn sample_reward<R: Rng + ?Sized>(&self, action: usize, rng: &mut R) -> Result<f64> {
        let mean = self.instance.mean_reward(action)?;
        Ok(self.noise.draw(mean, rng))
    }
}

/// Action set of the linear experiments: the canonical basis of R^d followed by
/// `k - d` vectors with i.i.d. Uniform(0, 1) coordinates scaled to unit length.
pub fn make_linear_action_set(k: usize, d: usize, stream: &RngStream) -> Result<ActionSet> {
    if d == 0 {
        return Err(invalid("d", "dimension must be >= 1"));
    }
    if k < d {
        return Err(invalid("K", format!("need K >= d, got K = {k}, d = {d}")));
    }
    let mut rng = stream.rng();
    let mut vectors: Vec<DVector<f64>> = (0..d)
        .map(|i| DVector::from_fn(d, |j, _| if i == j { 1.0 } else { 0.0 }))
        .collect();
    while vectors.len() < k {
        let v = DVector::from_fn(d, |_, _| rng.random::<f64>());
        let norm = v.norm();
        // all-zero draws have probability zero but cannot be normalized
        if norm > 0.0 {
            vectors.push(v / norm);
        }
    }
    ActionSet::featurized(vectors, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Prior;

    fn indexed(theta: Vec<f64>) -> BanditInstance {
        let k = theta.len();
        BanditInstance::new(theta, ActionSet::indexed(k).unwrap()).unwrap()
    }

    #[test]
    fn vanishing_gaussian_noise() {
        let env = Environment::new(NoiseModel::Gaussian { sigma: 1e-12 }, indexed(vec![0.7])).unwrap();
        let mut rng = RngStream::new(1, 1).rng();
        for _ in 0..100 {
            assert!((env.sample_reward(0, &mut rng).unwrap() - 0.7).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_bernoulli() {
        let env = Environment::new(NoiseModel::Bernoulli, indexed(vec![1.0, 0.0])).unwrap();
        let mut rng = RngStream::new(1, 1).rng();
        for _ in 0..1000 {
            assert_eq!(env.sample_reward(0, &mut rng).unwrap(), 1.0);
            assert_eq!(env.sample_reward(1, &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn bernoulli_rejects_means_outside_unit_interval() {
        assert!(matches!(
            Environment::new(NoiseModel::Bernoulli, indexed(vec![0.5, 1.2])),
            Err(Error::MeanOutOfUnitInterval { action: 1, .. })
        ));
    }

    #[test]
    fn rademacher_two_point_support() {
        let env = Environment::new(NoiseModel::Rademacher { sigma: 2.0 }, indexed(vec![0.0])).unwrap();
        let mut rng = RngStream::new(5, 0).rng();
        let n = 1_000_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let y = env.sample_reward(0, &mut rng).unwrap();
            assert!(y == 2.0 || y == -2.0);
            sum += y;
        }
        // variance is exactly σ² = 4, so the standard error is 2/√n
        let mean = sum / n as f64;
        assert!(mean.abs() < 4.0 * 2.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn gaussian_noise_mean() {
        let env = Environment::new(NoiseModel::Gaussian { sigma: 1.5 }, indexed(vec![0.3, -2.0])).unwrap();
        let mut rng = RngStream::new(11, 0).rng();
        let n = 1_000_000;
        let mean = (0..n).map(|_| env.sample_reward(1, &mut rng).unwrap()).sum::<f64>() / n as f64;
        assert!((mean + 2.0).abs() < 4.0 * 1.5 / (n as f64).sqrt());
    }

    #[test]
    fn out_of_range_action() {
        let env = Environment::new(NoiseModel::Gaussian { sigma: 1.0 }, indexed(vec![0.0])).unwrap();
        assert!(env.sample_reward(1, &mut RngStream::new(0, 0).rng()).is_err());
    }

    #[test]
    fn model_and_action_set_must_agree() {
        let lin = BanditInstance::new(vec![1.0, 0.0], ActionSet::canonical_basis(2).unwrap()).unwrap();
        assert!(Environment::new(NoiseModel::Gaussian { sigma: 1.0 }, lin.clone()).is_err());
        assert!(Environment::new(NoiseModel::LinearGaussian { sigma: 1.0 }, lin).is_ok());
        assert!(Environment::new(NoiseModel::LinearGaussian { sigma: 1.0 }, indexed(vec![0.0])).is_err());
        assert!(Environment::new(NoiseModel::Gaussian { sigma: 0.0 }, indexed(vec![0.0])).is_err());
    }

    #[test]
    fn square_action_set_is_canonical_basis() {
        let set = make_linear_action_set(4, 4, &RngStream::new(0, 0)).unwrap();
        assert_eq!(set, ActionSet::canonical_basis(4).unwrap());
    }

    #[test]
    fn random_actions_are_unit_nonnegative() {
        let set = make_linear_action_set(30, 10, &RngStream::new(3, 9)).unwrap();
        let ActionSet::Featurized { vectors, norm_bound } = &set else {
            panic!("expected featurized set");
        };
        assert_eq!(vectors.len(), 30);
        assert_eq!(*norm_bound, 1.0);
        for v in &vectors[10..] {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert!(v.iter().all(|x| *x >= 0.0));
        }
    }

    #[test]
    fn first_action_is_best_under_prior_mean() {
        for seed in 0..20 {
            let set = make_linear_action_set(30, 10, &RngStream::new(seed, 1)).unwrap();
            for gap in [0.0, 0.5, 1.0, 4.0] {
                let mut theta0 = vec![-1.0; 10];
                theta0[0] = gap;
                let inst = BanditInstance::new(theta0, set.clone()).unwrap();
                assert_eq!(inst.optimal_action(), 0);
                assert_eq!(inst.mean_reward(0).unwrap(), gap);
            }
        }
    }

    #[test]
    fn k_below_d_rejected() {
        assert!(make_linear_action_set(3, 4, &RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn generated_set_matches_linear_prior() {
        let set = make_linear_action_set(12, 3, &RngStream::new(0, 0)).unwrap();
        let prior = Prior::linear(DVector::zeros(3), nalgebra::DMatrix::identity(3, 3)).unwrap();
        assert!(crate::model::sample_instance(&prior, &set, &RngStream::new(0, 1)).is_ok());
    }
}
