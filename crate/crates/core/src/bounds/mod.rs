//! Numerical evaluation of Bayes regret bounds.
//!
//! Closed forms are evaluated directly. Prior expectations (random gaps,
//! complexity terms, `E[Δ_a]`) are Monte Carlo estimates drawn from a
//! [`Sampling`] stream, sharded so the estimate does not depend on the thread
//! count. `L` below always stands for `log(1/δ)`.

mod bernoulli;
mod gaussian;
mod linear;

pub use bernoulli::{thm5_bernoulli_bounds, thm5_gap_dependent, thm5_prior_dependent};
pub use gaussian::{
    action_count_bound, appendix_c_small_sigma0_bound, complexity_term, corollary2_bound, corollary2_threshold,
    lemma3_upper_bound, sqrt_bound_karmed, thm1_leading_term, thm4_ucb1_bound, two_arm_complexity_closed_form,
    ucb1_leading_term,
};
pub use linear::{lemma8_variance_budget, sqrt_bound_linear, thm6_linear_bound, LinearBoundParams};

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::rng::{RngStream, RESERVED_STREAM_BASE};
use crate::stats::Welford;

/// Default number of Monte Carlo samples for prior expectations.
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

/// A bound value with its additive pieces.
///
/// `components` sum to `value`. `details` carries anything else worth
/// reporting (unclamped variants, derived constants) and does not enter the sum.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEstimate {
    pub value: f64,
    /// Zero for deterministic formulas.
    pub std_error: f64,
    pub num_samples: usize,
    pub components: Vec<(String, f64)>,
    pub details: Vec<(String, f64)>,
}

impl BoundEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            num_samples: 0,
            components: Vec::new(),
            details: Vec::new(),
        }
    }

    /// Builds an estimate whose value is the sum of `components`.
    pub fn from_components(components: Vec<(String, f64)>, std_error: f64, num_samples: usize) -> Self {
        let value = components.iter().map(|(_, v)| v).sum();
        Self {
            value,
            std_error,
            num_samples,
            components,
            details: Vec::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.push((key.to_string(), value));
        self
    }

    pub fn component(&self, key: &str) -> Option<f64> {
        self.components.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn is_deterministic(&self) -> bool {
        self.std_error == 0.0 && self.num_samples == 0
    }
}

/// Where Monte Carlo draws come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub stream: RngStream,
    pub execution: Execution,
}

impl Sampling {
    pub fn new(stream: RngStream) -> Self {
        Self {
            stream,
            execution: Execution::default(),
        }
    }

    /// Stream reserved for bound estimation under a master seed.
    pub fn for_seed(master_seed: u64) -> Self {
        Self::new(RngStream::new(master_seed, RESERVED_STREAM_BASE | 0x0b0d))
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    /// Independent sub-sampling for a named sub-estimate.
    pub fn child(&self, label: u64) -> Self {
        Self {
            stream: self.stream.substream(label),
            execution: self.execution,
        }
    }
}

/// How the shifts `ξ_a` in the complexity term are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiMode {
    /// `ξ_a = 0`, the n → ∞ limit.
    Asymptotic,
    /// Supremum of `h_a(θ*_a − ξ)` over `ξ ∈ [1/n, 1/√log n]`, which
    /// dominates any admissible choice of `ξ_a`.
    RangeSupremum,
}

impl XiMode {
    pub fn name(&self) -> &'static str {
        match self {
            XiMode::Asymptotic => "asymptotic",
            XiMode::RangeSupremum => "range_supremum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityTermSpec {
    pub xi_mode: XiMode,
    pub num_mc_samples: usize,
}

impl ComplexityTermSpec {
    pub fn new(xi_mode: XiMode, num_mc_samples: usize) -> Result<Self> {
        if num_mc_samples == 0 {
            return Err(invalid("num_mc_samples", "must be >= 1"));
        }
        Ok(Self { xi_mode, num_mc_samples })
    }
}

/// `log(1/δ)` with δ validated.
pub(crate) fn log_inv_delta(delta: f64) -> Result<f64> {
    crate::error::ensure_probability("delta", delta)?;
    Ok(-delta.ln())
}

pub(crate) fn ensure_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        Err(invalid("samples", "Monte Carlo sample count must be >= 1"))
    } else {
        Ok(())
    }
}

/// `log n` for horizons where `√log n` and `log log n` make sense.
pub(crate) fn log_horizon(n: u64) -> Result<f64> {
    let ln = (n as f64).ln();
    if n < 3 {
        return Err(invalid("n", format!("horizon must exceed e, got {n}")));
    }
    Ok(ln)
}

/// Interval of shifted evaluation points `θ* − ξ` for `ξ ∈ [1/n, 1/√log n]`.
pub(crate) fn shift_interval(theta_star: f64, n: u64) -> (f64, f64) {
    let ln = (n as f64).ln();
    (theta_star - 1.0 / ln.sqrt(), theta_star - 1.0 / n as f64)
}

pub(crate) fn mean_and_error(w: &Welford) -> (f64, f64) {
    (w.mean, w.std_error())
}
