use std::f64::consts::PI;

use rand_distr::{Distribution, StandardNormal};

use super::{
    ensure_samples, log_horizon, log_inv_delta, mean_and_error, shift_interval, BoundEstimate, ComplexityTermSpec,
    Sampling, XiMode,
};
use crate::error::{ensure_positive, invalid, Error, Result};
use crate::model::Prior;
use crate::stats::mc_estimate;

/// Child label of the complexity-term draws. Bounds that share a complexity
/// term (`corollary2_bound`, `thm4_ucb1_bound`) use the same draws so their difference is exact.
const COMPLEXITY_STREAM: u64 = 1;
const GAP_STREAM: u64 = 2;

pub(super) fn gaussian_parts(prior: &Prior) -> Result<(&[f64], f64)> {
    match prior {
        Prior::GaussianKArmed { means, sigma0 } => Ok((means, *sigma0)),
        _ => Err(Error::Unsupported("this bound", "Gaussian K-armed prior")),
    }
}

fn draw_theta<R: rand::Rng + ?Sized>(means: &[f64], sigma0: f64, rng: &mut R, out: &mut Vec<f64>) {
    out.clear();
    out.extend(means.iter().map(|m| {
        let z: f64 = StandardNormal.sample(rng);
        m + sigma0 * z
    }));
}

/// Largest and second largest entries with the position of the largest.
pub(super) fn top_two(xs: &[f64]) -> (usize, f64, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    let mut second = f64::NEG_INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        if x > best.1 {
            second = best.1;
            best = (i, x);
        } else if x > second {
            second = x;
        }
    }
    (best.0, best.1, second)
}

/// Shared Monte Carlo core of the gap-dependent Gaussian bound.
/// Returns (clamped, unclamped) leading-term estimates.
#[allow(clippy::too_many_arguments)]
fn gap_dependent(
    means: &[f64],
    sigma0: f64,
    penalty_inv_var: f64,
    sigma: f64,
    log_inv_delta: f64,
    epsilon: f64,
    samples: usize,
    sampling: &Sampling,
) -> (crate::stats::Welford, crate::stats::Welford) {
    let s2 = sigma * sigma;
    let est = mc_estimate(&sampling.stream, samples, 2, sampling.execution, |rng, out| {
        let mut theta = Vec::with_capacity(means.len());
        draw_theta(means, sigma0, rng, &mut theta);
        let (best, top, _) = top_two(&theta);
        let (mut clamped, mut raw) = (0.0, 0.0);
        for (a, &t) in theta.iter().enumerate() {
            if a == best {
                continue;
            }
            let gap = (top - t).max(epsilon);
            let term = 8.0 * s2 * log_inv_delta / gap - s2 * gap * penalty_inv_var;
            raw += term;
            clamped += term.max(0.0);
        }
        out[0] = clamped;
        out[1] = raw;
    });
    (est[0], est[1])
}

fn karmed_failure_term(log_inv_delta: f64, scale: f64, k: usize, n: u64, delta: f64) -> f64 {
    let k = k as f64;
    2.0 * ((2.0 * log_inv_delta).sqrt() + 2.0 * k) * scale * k * n as f64 * delta
}

/// Gap-dependent BayesUCB bound for a K-armed Gaussian bandit.
///
/// The per-instance summands `8σ²L/Δ_a^ε − σ²Δ_a^ε/σ0²` are clamped at zero;
/// the unclamped estimate is reported under `details`.
pub fn thm1_leading_term(
    prior: &Prior,
    sigma: f64,
    delta: f64,
    epsilon: f64,
    n: u64,
    samples: usize,
    sampling: &Sampling,
) -> Result<BoundEstimate> {
    let (means, sigma0) = gaussian_parts(prior)?;
    ensure_positive("sigma", sigma)?;
    ensure_positive("epsilon", epsilon)?;
    ensure_samples(samples)?;
    let l = log_inv_delta(delta)?;
    let (clamped, raw) = gap_dependent(means, sigma0, 1.0 / (sigma0 * sigma0), sigma, l, epsilon, samples, sampling);
    let low_order = epsilon * n as f64 + karmed_failure_term(l, sigma0, means.len(), n, delta);
    Ok(BoundEstimate::from_components(
        vec![("leading".into(), clamped.mean), ("low_order".into(), low_order)],
        clamped.std_error(),
        samples,
    )
    .with_detail("leading_unclamped", raw.mean)
    .with_detail("leading_unclamped_se", raw.std_error()))
}

/// Gap-dependent leading term with `σ0 = ∞` in the penalty, i.e. the UCB1
/// counterpart of [`thm1_leading_term`]. Instances are still drawn from the
/// prior.
pub fn ucb1_leading_term(
    prior: &Prior,
    sigma: f64,
    delta: f64,
    epsilon: f64,
    samples: usize,
    sampling: &Sampling,
) -> Result<BoundEstimate> {
    let (means, sigma0) = gaussian_parts(prior)?;
    ensure_positive("sigma", sigma)?;
    ensure_positive("epsilon", epsilon)?;
    ensure_samples(samples)?;
    let l = log_inv_delta(delta)?;
    let (clamped, _) = gap_dependent(means, sigma0, 0.0, sigma, l, epsilon, samples, sampling);
    Ok(BoundEstimate::from_components(
        vec![("leading".into(), clamped.mean)],
        clamped.std_error(),
        samples,
    ))
}

fn normal_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / ((2.0 * PI).sqrt() * sd)
}

/// `h_a(θ* − ξ)` for a Gaussian arm density, with ξ resolved by `mode`.
pub(super) fn shifted_density(mu: f64, sigma0: f64, star: f64, mode: XiMode, n: u64) -> f64 {
    let x = match mode {
        XiMode::Asymptotic => star,
        XiMode::RangeSupremum => {
            let (lo, hi) = shift_interval(star, n);
            mu.clamp(lo, hi)
        }
    };
    normal_pdf(x, mu, sigma0)
}

/// Prior-density complexity term `Σ_a E_{θ−a}[h_a(θ*_a − ξ_a)]` for Gaussian
/// or Beta priors.
pub fn complexity_term(prior: &Prior, spec: &ComplexityTermSpec, n: u64, sampling: &Sampling) -> Result<BoundEstimate> {
    ensure_samples(spec.num_mc_samples)?;
    log_horizon(n)?;
    let mode = spec.xi_mode;
    let est = match prior {
        Prior::GaussianKArmed { means, sigma0 } => {
            let sigma0 = *sigma0;
            mc_estimate(&sampling.stream, spec.num_mc_samples, 1, sampling.execution, |rng, out| {
                let mut theta = Vec::with_capacity(means.len());
                draw_theta(means, sigma0, rng, &mut theta);
                let (best, top, second) = top_two(&theta);
                let mut sum = 0.0;
                for (a, &mu) in means.iter().enumerate() {
                    let star = if a == best { second } else { top };
                    if star == f64::NEG_INFINITY {
                        continue;
                    }
                    sum += shifted_density(mu, sigma0, star, mode, n);
                }
                out[0] = sum;
            })
        }
        Prior::BetaPerArm { alpha, beta } => super::bernoulli::beta_complexity(alpha, beta, mode, n, spec, sampling)?,
        Prior::LinearGaussian { .. } => {
            return Err(Error::Unsupported("complexity_term", "K-armed Gaussian or Beta prior"))
        }
    };
    let (value, se) = mean_and_error(&est[0]);
    Ok(BoundEstimate::from_components(vec![("complexity".into(), value)], se, spec.num_mc_samples))
}

/// `(1/√(πσ0²)) exp(−(μ0,1 − μ0,2)²/(4σ0²))`, the exact two-arm complexity term
/// in the asymptotic mode.
pub fn two_arm_complexity_closed_form(prior: &Prior) -> Result<f64> {
    let (means, sigma0) = gaussian_parts(prior)?;
    if means.len() != 2 {
        return Err(invalid("prior", "closed form needs exactly two arms"));
    }
    let s2 = sigma0 * sigma0;
    let d = means[0] - means[1];
    Ok((-d * d / (4.0 * s2)).exp() / (PI * s2).sqrt())
}

/// Pairwise-exponential upper bound on the asymptotic complexity term.
pub fn lemma3_upper_bound(prior: &Prior) -> Result<BoundEstimate> {
    let (means, sigma0) = gaussian_parts(prior)?;
    let s2 = sigma0 * sigma0;
    let mut sum = 0.0;
    for (a, ma) in means.iter().enumerate() {
        for (b, mb) in means.iter().enumerate() {
            if a != b {
                let d = ma - mb;
                sum += (-d * d / (4.0 * s2)).exp();
            }
        }
    }
    Ok(BoundEstimate::exact(sum / (2.0 * (PI * s2).sqrt())))
}

/// Smallest σ0² for which the prior-dependent BayesUCB bound applies.
pub fn corollary2_threshold(delta: f64, n: u64) -> Result<f64> {
    let l = log_inv_delta(delta)?;
    let ln = log_horizon(n)?;
    let nf = n as f64;
    Ok(1.0 / (8.0 * l * nf * nf * ln.ln()))
}

/// Prior-dependent BayesUCB bound for a K-armed Gaussian bandit.
///
/// Fails with a precondition error whose reason starts with
/// `use_appendix_c` when σ0 is below the validity threshold.
pub fn corollary2_bound(
    prior: &Prior,
    sigma: f64,
    delta: f64,
    n: u64,
    spec: &ComplexityTermSpec,
    sampling: &Sampling,
) -> Result<BoundEstimate> {
    let (means, sigma0) = gaussian_parts(prior)?;
    ensure_positive("sigma", sigma)?;
    let l = log_inv_delta(delta)?;
    let ln = log_horizon(n)?;
    let threshold = corollary2_threshold(delta, n)?;
    if sigma0 * sigma0 < threshold {
        return Err(Error::Precondition {
            bound: "corollary2",
            reason: format!("use_appendix_c: sigma0^2 = {} < {threshold}", sigma0 * sigma0),
        });
    }
    let s2 = sigma * sigma;
    let k = means.len();
    let kf = k as f64;
    let bracket = 8.0 * s2 * l * ln - s2 / (2.0 * sigma0 * sigma0 * ln);
    let ct = complexity_term(prior, spec, n, &sampling.child(COMPLEXITY_STREAM))?;
    let base = 8.0 * s2 * kf * l * ln.sqrt() + 1.0;
    let low_order = base + karmed_failure_term(l, sigma0, k, n, delta);
    let alternative = base + (2.0 * (2.0 * l).sqrt() + 1.0) * sigma0 * kf * n as f64 * delta;
    Ok(BoundEstimate::from_components(
        vec![("leading".into(), bracket * ct.value), ("low_order".into(), low_order)],
        bracket.abs() * ct.std_error,
        ct.num_samples,
    )
    .with_detail("bracket", bracket)
    .with_detail("complexity", ct.value)
    .with_detail("complexity_se", ct.std_error)
    .with_detail("low_order_complete_statement", alternative))
}

/// O(1) regime of BayesUCB when σ0² is below `corollary2_threshold`.
pub fn appendix_c_small_sigma0_bound(sigma0: f64, delta: f64, n: u64, k: usize) -> Result<BoundEstimate> {
    ensure_positive("sigma0", sigma0)?;
    if k == 0 {
        return Err(invalid("K", "must be >= 1"));
    }
    let l = log_inv_delta(delta)?;
    let ln = log_horizon(n)?;
    let threshold = corollary2_threshold(delta, n)?;
    if sigma0 * sigma0 >= threshold {
        return Err(Error::Precondition {
            bound: "appendix_c",
            reason: format!("sigma0^2 = {} is not below {threshold}", sigma0 * sigma0),
        });
    }
    let failure = (2.0 * (2.0 * l).sqrt() + 1.0) / (8.0 * l * ln.ln()).sqrt() * k as f64 * delta;
    Ok(BoundEstimate::from_components(
        vec![("failure".into(), failure), ("constant".into(), 1.0)],
        0.0,
        0,
    ))
}

/// Prior-dependent UCB1 bound for a K-armed Gaussian bandit.
pub fn thm4_ucb1_bound(
    prior: &Prior,
    sigma: f64,
    delta: f64,
    n: u64,
    spec: &ComplexityTermSpec,
    sampling: &Sampling,
) -> Result<BoundEstimate> {
    let (means, sigma0) = gaussian_parts(prior)?;
    ensure_positive("sigma", sigma)?;
    let l = log_inv_delta(delta)?;
    let ln = log_horizon(n)?;
    let s2 = sigma * sigma;
    let k = means.len();
    let ct = complexity_term(prior, spec, n, &sampling.child(COMPLEXITY_STREAM))?;
    let gaps_stream = sampling.child(GAP_STREAM);
    let gaps = mc_estimate(&gaps_stream.stream, spec.num_mc_samples, 1, gaps_stream.execution, |rng, out| {
        let mut theta = Vec::with_capacity(k);
        draw_theta(means, sigma0, rng, &mut theta);
        let (_, top, _) = top_two(&theta);
        out[0] = theta.iter().map(|t| top - t).sum();
    });
    let (gap_sum, gap_se) = mean_and_error(&gaps[0]);
    let factor = 8.0 * s2 * l * ln;
    let low_order =
        8.0 * s2 * k as f64 * l * ln.sqrt() + karmed_failure_term(l, sigma, k, n, delta) + gap_sum + 1.0;
    let se = ((factor * ct.std_error).powi(2) + gap_se * gap_se).sqrt();
    Ok(BoundEstimate::from_components(
        vec![("leading".into(), factor * ct.value), ("low_order".into(), low_order)],
        se,
        spec.num_mc_samples,
    )
    .with_detail("complexity", ct.value)
    .with_detail("complexity_se", ct.std_error)
    .with_detail("sum_expected_gaps", gap_sum)
    .with_detail("sum_expected_gaps_se", gap_se))
}

/// Prior-dependent √n baseline for K-armed Gaussian bandits with δ = 1/n.
/// `sigma0` may be infinite.
pub fn sqrt_bound_karmed(sigma: f64, sigma0: f64, k: usize, n: u64) -> Result<BoundEstimate> {
    ensure_positive("sigma", sigma)?;
    if sigma0.is_nan() || sigma0 <= 0.0 {
        return Err(invalid("sigma0", format!("must be > 0, got {sigma0}")));
    }
    if k == 0 {
        return Err(invalid("K", "must be >= 1"));
    }
    let s2 = sigma * sigma;
    let kf = k as f64;
    let nf = n as f64;
    let c = s2 * kf / (sigma0 * sigma0);
    // √(n + c) − √c without cancellation
    let diff = nf / ((nf + c).sqrt() + c.sqrt());
    Ok(BoundEstimate::exact(4.0 * (2.0 * s2 * kf * nf.ln()).sqrt() * diff))
}

/// Right-hand side of the per-arm pull count bound on the good event:
/// `8σ²L/Δ² − σ²/σ0²`.
pub fn action_count_bound(sigma: f64, sigma0: f64, delta: f64, gap: f64) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    ensure_positive("gap", gap)?;
    let l = log_inv_delta(delta)?;
    let s2 = sigma * sigma;
    Ok(8.0 * s2 * l / (gap * gap) - s2 / (sigma0 * sigma0))
}
