use statrs::function::gamma::gamma_ur;

use super::{ensure_samples, log_inv_delta, BoundEstimate, Sampling};
use crate::error::{ensure_positive, invalid, Error, Result};
use crate::linalg::max_eigenvalue;
use crate::model::{ActionSet, GapProfile, Prior, PriorSampler};
use crate::stats::mc_estimate;

/// Multiple of `√(λ1(Σ0) d)` added to `‖θ0‖` to get the norm bound `L*`.
const NORM_QUANTILE: f64 = 5.0;

/// Inputs of the linear gap-dependent bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBoundParams {
    pub sigma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub n: u64,
    pub samples: usize,
}

/// `ln(1 + x)/x`-stable evaluation of the posterior variance budget in
/// σ²-units: `σ² d · (x / ln(1+x)) · ln(1 + x n / d)` with `x = σ0,max²/σ²`.
fn budget(sigma: f64, sigma0max: f64, d: usize, n: f64) -> f64 {
    let s2 = sigma * sigma;
    let x = sigma0max * sigma0max / s2;
    let d = d as f64;
    if x == 0.0 || n == 0.0 {
        return 0.0;
    }
    s2 * d * (x / x.ln_1p()) * (x * n / d).ln_1p()
}

/// Upper bound on `Σ_t ‖A_t‖²_{Σ̂_t}` over n rounds.
pub fn lemma8_variance_budget(sigma: f64, sigma0max: f64, d: usize, n: u64) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    if !(sigma0max >= 0.0 && sigma0max.is_finite()) {
        return Err(invalid("sigma0max", format!("must be finite and >= 0, got {sigma0max}")));
    }
    if d == 0 {
        return Err(invalid("d", "must be >= 1"));
    }
    Ok(budget(sigma, sigma0max, d, n as f64))
}

/// Gap-free √n baseline for linear BayesUCB.
pub fn sqrt_bound_linear(sigma: f64, sigma0max: f64, d: usize, n: u64, delta: f64) -> Result<BoundEstimate> {
    let l = log_inv_delta(delta)?;
    let b = lemma8_variance_budget(sigma, sigma0max, d, n)?;
    Ok(BoundEstimate::exact(2.0 * (2.0 * n as f64 * b * l).sqrt()))
}

/// Gap-dependent linear BayesUCB bound.
///
/// `E[1/Δ_min^ε]` is estimated over prior draws on the full action set. The
/// norm bound `L* = ‖θ0‖ + 5√(λ1(Σ0) d)` holds except with probability at most
/// `δ* = P(χ²_d > 25d)`; both are reported in `details`.
pub fn thm6_linear_bound(
    prior: &Prior,
    action_set: &ActionSet,
    params: &LinearBoundParams,
    sampling: &Sampling,
) -> Result<BoundEstimate> {
    let Prior::LinearGaussian { mean, cov } = prior else {
        return Err(Error::Unsupported("thm6_linear_bound", "linear Gaussian prior"));
    };
    let ActionSet::Featurized { vectors, norm_bound } = action_set else {
        return Err(Error::Unsupported("thm6_linear_bound", "featurized action set"));
    };
    let LinearBoundParams { sigma, delta, epsilon, n, samples } = *params;
    ensure_positive("sigma", sigma)?;
    ensure_positive("epsilon", epsilon)?;
    ensure_samples(samples)?;
    let l = log_inv_delta(delta)?;
    let d = mean.len();
    let lambda1 = max_eigenvalue(cov)?.max(0.0);
    let sigma0max = lambda1.sqrt() * norm_bound;
    let sampler = PriorSampler::new(prior)?;

    let est = mc_estimate(&sampling.stream, samples, 1, sampling.execution, |rng, out| {
        let theta = sampler.sample(rng);
        let means = action_set.means(&theta);
        let profile = GapProfile::from_means(&means);
        // Δ_min = ∞ for a single action, so the term vanishes
        out[0] = 1.0 / profile.min_gap.max(epsilon);
    });
    let inv_gap = est[0].mean;
    let var_budget = budget(sigma, sigma0max, d, n as f64);
    let leading = 8.0 * inv_gap * var_budget * l;
    let df = d as f64;
    let l_star = mean.norm() + NORM_QUANTILE * (lambda1 * df).sqrt();
    let delta_star = gamma_ur(df / 2.0, NORM_QUANTILE * NORM_QUANTILE * df / 2.0);
    let k = vectors.len() as f64;
    let low_order = epsilon * n as f64 + 4.0 * norm_bound * l_star * k * n as f64 * delta;
    Ok(BoundEstimate::from_components(
        vec![("leading".into(), leading), ("low_order".into(), low_order)],
        8.0 * var_budget * l * est[0].std_error(),
        samples,
    )
    .with_detail("expected_inverse_min_gap", inv_gap)
    .with_detail("expected_inverse_min_gap_se", est[0].std_error())
    .with_detail("sigma0_max", sigma0max)
    .with_detail("variance_budget", var_budget)
    .with_detail("norm_bound_star", l_star)
    .with_detail("delta_star", delta_star))
}
