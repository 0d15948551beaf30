use rand_distr::{Beta, Distribution};
use statrs::function::beta::ln_beta;

use super::gaussian::top_two;
use super::{
    complexity_term, ensure_samples, log_horizon, log_inv_delta, shift_interval, BoundEstimate, ComplexityTermSpec,
    Sampling, XiMode,
};
use crate::error::{ensure_positive, Error, Result};
use crate::model::Prior;
use crate::stats::{mc_estimate, Welford};

const COMPLEXITY_STREAM: u64 = 1;

fn beta_parts(prior: &Prior) -> Result<(&[f64], &[f64])> {
    match prior {
        Prior::BetaPerArm { alpha, beta } => Ok((alpha, beta)),
        _ => Err(Error::Unsupported("this bound", "Beta per-arm prior")),
    }
}

fn samplers(alpha: &[f64], beta: &[f64]) -> Result<Vec<Beta<f64>>> {
    alpha
        .iter()
        .zip(beta)
        .map(|(&a, &b)| Beta::new(a, b).map_err(|e| crate::error::invalid("prior", e.to_string())))
        .collect()
}

/// Beta(α, β) density, zero outside (0, 1).
fn beta_pdf(x: f64, a: f64, b: f64, ln_norm: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        // boundary values only matter for the range supremum, handled there
        return 0.0;
    }
    ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_norm).exp()
}

/// Supremum of the Beta density over `[lo, hi] ∩ (0, 1)`.
///
/// With α, β ≥ 1 the density is log-concave, so the supremum sits at the mode
/// projected onto the interval. Otherwise it is monotone or log-convex and the
/// supremum is at an endpoint, possibly the unbounded edge at 0.
fn beta_sup(lo: f64, hi: f64, a: f64, b: f64, ln_norm: f64) -> f64 {
    if hi <= 0.0 {
        return 0.0;
    }
    if lo <= 0.0 && a < 1.0 {
        return f64::INFINITY;
    }
    let lo = lo.max(0.0);
    if a >= 1.0 && b >= 1.0 {
        let mode = if a + b > 2.0 { (a - 1.0) / (a + b - 2.0) } else { 0.5 };
        let x = mode.clamp(lo, hi);
        if x == 0.0 {
            // a == 1: density at 0⁺ is the limit b / B(1, b)
            return ((b - 1.0) * 0.0 - ln_norm).exp();
        }
        return beta_pdf(x, a, b, ln_norm);
    }
    let left = if lo == 0.0 { 0.0 } else { beta_pdf(lo, a, b, ln_norm) };
    left.max(beta_pdf(hi, a, b, ln_norm))
}

pub(super) fn beta_complexity(
    alpha: &[f64],
    beta: &[f64],
    mode: XiMode,
    n: u64,
    spec: &ComplexityTermSpec,
    sampling: &Sampling,
) -> Result<Vec<Welford>> {
    let dists = samplers(alpha, beta)?;
    let norms: Vec<f64> = alpha.iter().zip(beta).map(|(&a, &b)| ln_beta(a, b)).collect();
    Ok(mc_estimate(&sampling.stream, spec.num_mc_samples, 1, sampling.execution, |rng, out| {
        let theta: Vec<f64> = dists.iter().map(|d| d.sample(rng)).collect();
        let (best, top, second) = top_two(&theta);
        let mut sum = 0.0;
        for a in 0..theta.len() {
            let star = if a == best { second } else { top };
            if star == f64::NEG_INFINITY {
                continue;
            }
            sum += match mode {
                XiMode::Asymptotic => beta_pdf(star, alpha[a], beta[a], norms[a]),
                XiMode::RangeSupremum => {
                    let (lo, hi) = shift_interval(star, n);
                    beta_sup(lo, hi, alpha[a], beta[a], norms[a])
                }
            };
        }
        out[0] = sum;
    }))
}

/// Gap-dependent BayesUCB bound for a K-armed Bernoulli bandit, with summands
/// `2L/Δ_a^ε − (α_a + β_a + 1)Δ_a^ε` clamped at zero.
pub fn thm5_gap_dependent(
    prior: &Prior,
    delta: f64,
    epsilon: f64,
    n: u64,
    samples: usize,
    sampling: &Sampling,
) -> Result<BoundEstimate> {
    let (alpha, beta) = beta_parts(prior)?;
    ensure_positive("epsilon", epsilon)?;
    ensure_samples(samples)?;
    let l = log_inv_delta(delta)?;
    let dists = samplers(alpha, beta)?;
    let est = mc_estimate(&sampling.stream, samples, 2, sampling.execution, |rng, out| {
        let theta: Vec<f64> = dists.iter().map(|d| d.sample(rng)).collect();
        let (best, top, _) = top_two(&theta);
        let (mut clamped, mut raw) = (0.0, 0.0);
        for (a, &t) in theta.iter().enumerate() {
            if a == best {
                continue;
            }
            let gap = (top - t).max(epsilon);
            let term = 2.0 * l / gap - (alpha[a] + beta[a] + 1.0) * gap;
            raw += term;
            clamped += term.max(0.0);
        }
        out[0] = clamped;
        out[1] = raw;
    });
    let k = alpha.len() as f64;
    let low_order = epsilon * n as f64 + 2.0 * k * n as f64 * delta;
    Ok(BoundEstimate::from_components(
        vec![("leading".into(), est[0].mean), ("low_order".into(), low_order)],
        est[0].std_error(),
        samples,
    )
    .with_detail("leading_unclamped", est[1].mean)
    .with_detail("leading_unclamped_se", est[1].std_error()))
}

/// Prior-dependent BayesUCB bound for a K-armed Bernoulli bandit.
pub fn thm5_prior_dependent(
    prior: &Prior,
    delta: f64,
    n: u64,
    spec: &ComplexityTermSpec,
    sampling: &Sampling,
) -> Result<BoundEstimate> {
    let (alpha, beta) = beta_parts(prior)?;
    let l = log_inv_delta(delta)?;
    let ln = log_horizon(n)?;
    let lambda = alpha.iter().zip(beta).map(|(a, b)| a + b + 1.0).fold(f64::INFINITY, f64::min);
    let nf = n as f64;
    let limit = 2.0 * l * nf * nf * ln.ln();
    if lambda > limit {
        return Err(Error::Precondition {
            bound: "thm5_prior_dependent",
            reason: format!("lambda = {lambda} exceeds {limit}"),
        });
    }
    let k = alpha.len() as f64;
    let bracket = 2.0 * l * ln - lambda / (2.0 * ln);
    let ct = complexity_term(prior, spec, n, &sampling.child(COMPLEXITY_STREAM))?;
    let low_order = 2.0 * k * l * ln.sqrt() + 2.0 * k * nf * delta + 1.0;
    Ok(BoundEstimate::from_components(
        vec![("leading".into(), bracket * ct.value), ("low_order".into(), low_order)],
        bracket.abs() * ct.std_error,
        ct.num_samples,
    )
    .with_detail("lambda", lambda)
    .with_detail("bracket", bracket)
    .with_detail("complexity", ct.value)
    .with_detail("complexity_se", ct.std_error))
}

/// Both Bernoulli bounds. The second is an error when λ is too large.
pub fn thm5_bernoulli_bounds(
    prior: &Prior,
    delta: f64,
    epsilon: f64,
    n: u64,
    spec: &ComplexityTermSpec,
    sampling: &Sampling,
) -> Result<(BoundEstimate, Result<BoundEstimate>)> {
    let first = thm5_gap_dependent(prior, delta, epsilon, n, spec.num_mc_samples, &sampling.child(0))?;
    let second = thm5_prior_dependent(prior, delta, n, spec, sampling);
    Ok((first, second))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm(a: f64, b: f64) -> f64 {
        ln_beta(a, b)
    }

    #[test]
    fn sup_matches_dense_scan() {
        for &(a, b) in &[(2.0, 5.0), (1.0, 1.0), (0.5, 0.5), (0.7, 3.0), (4.0, 0.6), (1.0, 3.0), (3.0, 1.0)] {
            for &(lo, hi) in &[(0.1, 0.3), (0.5, 0.9), (0.01, 0.02), (0.6, 0.99)] {
                let ln_norm = norm(a, b);
                let exact = beta_sup(lo, hi, a, b, ln_norm);
                let scan = (0..=20_000)
                    .map(|i| beta_pdf(lo + (hi - lo) * i as f64 / 20_000.0, a, b, ln_norm))
                    .fold(0.0, f64::max);
                assert!(exact >= scan * (1.0 - 1e-12), "{a} {b} {lo} {hi}: {exact} < {scan}");
                assert!(exact <= scan * (1.0 + 1e-6), "{a} {b} {lo} {hi}: {exact} > {scan}");
            }
        }
    }

    #[test]
    fn unbounded_edge() {
        assert_eq!(beta_sup(-0.1, 0.2, 0.5, 2.0, norm(0.5, 2.0)), f64::INFINITY);
        assert_eq!(beta_sup(-0.3, -0.01, 2.0, 2.0, norm(2.0, 2.0)), 0.0);
        // α = 1: density at 0⁺ equals b
        assert!((beta_sup(-0.1, 0.2, 1.0, 3.0, norm(1.0, 3.0)) - 3.0).abs() < 1e-12);
    }
}
