use nalgebra::DMatrix;

use super::{bayes_regret, karmed_prior_means, linear_prior_mean, Experiment, ExperimentReport};
use crate::bounds::{
    sqrt_bound_karmed, sqrt_bound_linear, thm1_leading_term, thm5_gap_dependent, thm6_linear_bound, ucb1_leading_term,
    BoundEstimate, LinearBoundParams, Sampling,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::max_eigenvalue;
use crate::model::{ActionSet, Prior};

/// Prior parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Prior width σ0 (Σ0 = σ0² I for linear priors).
    Sigma0,
    /// Prior gap Δ0: means `(Δ0, 0, …, 0)` for K-armed priors and
    /// `(Δ0, −1, …, −1)` for linear priors.
    PriorGap,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Sigma0 => "sigma0",
            SweepParameter::PriorGap => "prior_gap",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigma0" => Some(SweepParameter::Sigma0),
            "prior_gap" | "gap" => Some(SweepParameter::PriorGap),
            _ => None,
        }
    }
}

/// Settings of the bound series drawn next to empirical regret.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSettings {
    pub delta: f64,
    pub epsilon: f64,
    pub samples: usize,
    pub sampling: Sampling,
}

/// One grid value of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub report: ExperimentReport,
    /// Named bound series; see [`figure_bounds`].
    pub bounds: Vec<(String, BoundEstimate)>,
}

/// Copy of `exp` with one prior parameter replaced, including the priors
/// held by its BayesUCB policies.
pub fn apply_parameter(exp: &Experiment, parameter: SweepParameter, value: f64) -> Result<Experiment> {
    if !value.is_finite() {
        return Err(invalid("grid", format!("values must be finite, got {value}")));
    }
    let prior = match (&exp.prior, parameter) {
        (Prior::GaussianKArmed { means, .. }, SweepParameter::Sigma0) => Prior::gaussian(means.clone(), value)?,
        (Prior::GaussianKArmed { means, sigma0 }, SweepParameter::PriorGap) => {
            Prior::gaussian(karmed_prior_means(means.len(), value), *sigma0)?
        }
        (Prior::LinearGaussian { mean, .. }, SweepParameter::Sigma0) => {
            if !(value.is_finite() && value > 0.0) {
                return Err(invalid("sigma0", format!("must be > 0, got {value}")));
            }
            let d = mean.len();
            Prior::linear(mean.clone(), DMatrix::identity(d, d) * (value * value))?
        }
        (Prior::LinearGaussian { mean, cov }, SweepParameter::PriorGap) => {
            Prior::linear(linear_prior_mean(mean.len(), value), cov.clone())?
        }
        (Prior::BetaPerArm { .. }, _) => return Err(Error::Unsupported("prior sweeps", "Gaussian or linear prior")),
    };
    let mut out = exp.clone();
    for p in &mut out.policies {
        if p.prior.is_some() {
            p.prior = Some(prior.clone());
        }
    }
    out.prior = prior;
    Ok(out)
}

/// Bound series for the figures of an experiment.
///
/// K-armed Gaussian: `thm1_leading`, `ucb1_leading` (the same with σ0 = ∞)
/// and `sqrt_karmed`. Linear: `thm6_leading` and `sqrt_linear`. Bernoulli:
/// `thm5_leading`. Each estimate carries its low-order term as a component.
pub fn figure_bounds(exp: &Experiment, settings: &BoundSettings) -> Result<Vec<(String, BoundEstimate)>> {
    let n = exp.horizon as u64;
    let BoundSettings { delta, epsilon, samples, sampling } = *settings;
    let sigma = exp.noise.sigma();
    Ok(match &exp.prior {
        Prior::GaussianKArmed { means, sigma0 } => {
            let sigma = sigma.ok_or(Error::Unsupported("Gaussian bounds", "noise scale"))?;
            vec![
                ("thm1_leading".into(), thm1_leading_term(&exp.prior, sigma, delta, epsilon, n, samples, &sampling)?),
                ("ucb1_leading".into(), ucb1_leading_term(&exp.prior, sigma, delta, epsilon, samples, &sampling)?),
                ("sqrt_karmed".into(), sqrt_bound_karmed(sigma, *sigma0, means.len(), n)?),
            ]
        }
        Prior::LinearGaussian { mean, cov } => {
            let sigma = sigma.ok_or(Error::Unsupported("linear bounds", "noise scale"))?;
            let ActionSet::Featurized { norm_bound, .. } = &exp.action_set else {
                return Err(Error::Unsupported("linear bounds", "featurized action set"));
            };
            let sigma0max = max_eigenvalue(cov)?.max(0.0).sqrt() * norm_bound;
            let params = LinearBoundParams { sigma, delta, epsilon, n, samples };
            vec![
                ("thm6_leading".into(), thm6_linear_bound(&exp.prior, &exp.action_set, &params, &sampling)?),
                ("sqrt_linear".into(), sqrt_bound_linear(sigma, sigma0max, mean.len(), n, delta)?),
            ]
        }
        Prior::BetaPerArm { .. } => vec![(
            "thm5_leading".into(),
            thm5_gap_dependent(&exp.prior, delta, epsilon, n, samples, &sampling)?,
        )],
    })
}

/// Runs the experiment at every grid value and evaluates its bound series.
pub fn sweep(
    base: &Experiment,
    parameter: SweepParameter,
    grid: &[f64],
    settings: &BoundSettings,
) -> Result<Vec<SweepPoint>> {
    if grid.is_empty() {
        return Err(invalid("grid", "sweep grid is empty"));
    }
    grid.iter()
        .map(|&value| {
            let exp = apply_parameter(base, parameter, value)?;
            let report = bayes_regret(&exp)?;
            let bounds = figure_bounds(&exp, settings)?;
            Ok(SweepPoint { value, report, bounds })
        })
        .collect()
}
