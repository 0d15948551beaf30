//! Monte Carlo estimation of Bayes regret.
//!
//! Run `r` of an experiment owns stream `r` of the master seed: substream 0
//! draws the instance, substream 1 the rewards (one further substream per
//! arm, so every policy sees the same reward sequence on each arm), and
//! substream 2 is kept for randomized tie-breaking, which the current
//! policies do not need. Runs are executed in fixed-size waves and reduced in
//! run order, so results do not depend on the thread count.

mod bakeoff;
mod sweep;

pub use bakeoff::{bakeoff_grid, BakeoffRow, BAKEOFF_GAPS, BAKEOFF_K, BAKEOFF_SIGMA0, BAKEOFF_SIGMAS};
pub use sweep::{apply_parameter, figure_bounds, sweep, BoundSettings, SweepParameter, SweepPoint};

use nalgebra::{DMatrix, DVector};

use crate::environment::{make_linear_action_set, Environment, NoiseModel};
use crate::error::{invalid, Result};
use crate::exec::{self, Execution};
use crate::model::{sample_instance, ActionSet, BanditInstance, Prior};
use crate::policy::{confidence_event_holds, PolicyConfig, PolicyState};
use crate::rng::{RngStream, StreamRng, RESERVED_STREAM_BASE};
use crate::stats::{Welford, WelfordVec};

const INSTANCE_STREAM: u64 = 0;
const REWARD_STREAM: u64 = 1;
/// Runs evaluated per parallel wave before their results are folded.
const WAVE: usize = 128;

/// A complete simulation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    /// Distribution of bandit instances.
    pub prior: Prior,
    pub action_set: ActionSet,
    pub noise: NoiseModel,
    /// All policies face the same instances and reward streams.
    pub policies: Vec<PolicyConfig>,
    pub horizon: usize,
    pub runs: usize,
    pub seed: u64,
    /// Track confidence events and the posterior variance ledger.
    pub diagnostics: bool,
    pub execution: Execution,
}

impl Experiment {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(invalid("runs", "must be >= 1"));
        }
        if self.horizon == 0 {
            return Err(invalid("horizon", "must be >= 1"));
        }
        if self.policies.is_empty() {
            return Err(invalid("policies", "need at least one policy"));
        }
        self.prior.validate()?;
        for p in &self.policies {
            p.init(&self.action_set)?;
        }
        // catches prior/action-set mismatches before any run starts
        sample_instance(&self.prior, &self.action_set, &RngStream::new(self.seed, 0))?;
        Ok(())
    }

    /// Stream of run `r`.
    pub fn run_stream(&self, run: usize) -> RngStream {
        RngStream::new(self.seed, run as u64)
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }
}

/// Prior mean vector `(Δ0, 0, …, 0)` of the K-armed experiments.
pub fn karmed_prior_means(k: usize, prior_gap: f64) -> Vec<f64> {
    let mut means = vec![0.0; k];
    if let Some(first) = means.first_mut() {
        *first = prior_gap;
    }
    means
}

/// Prior mean `(Δ0, −1, …, −1)` of the linear experiments.
pub fn linear_prior_mean(d: usize, prior_gap: f64) -> DVector<f64> {
    DVector::from_fn(d, |i, _| if i == 0 { prior_gap } else { -1.0 })
}

/// K-armed Gaussian bandit with prior `N((Δ0, 0, …, 0), σ0² I)`, comparing
/// BayesUCB against UCB1.
#[allow(clippy::too_many_arguments)]
pub fn karmed_gaussian_experiment(
    k: usize,
    prior_gap: f64,
    sigma0: f64,
    sigma: f64,
    delta: f64,
    horizon: usize,
    runs: usize,
    seed: u64,
) -> Result<Experiment> {
    let prior = Prior::gaussian(karmed_prior_means(k, prior_gap), sigma0)?;
    let exp = Experiment {
        action_set: ActionSet::indexed(k)?,
        noise: NoiseModel::Gaussian { sigma },
        policies: vec![
            PolicyConfig::bayes_ucb(prior.clone(), sigma, delta)?,
            PolicyConfig::ucb1(sigma, delta)?,
        ],
        prior,
        horizon,
        runs,
        seed,
        diagnostics: false,
        execution: Execution::default(),
    };
    exp.validate()?;
    Ok(exp)
}

/// Stream from which the linear action set of an experiment is drawn.
pub fn action_set_stream(seed: u64) -> RngStream {
    RngStream::new(seed, RESERVED_STREAM_BASE | 1)
}

/// Linear bandit with prior `N((Δ0, −1, …, −1), σ0² I_d)` on the basis-plus-
/// orthant action set. The action set is drawn once per seed.
#[allow(clippy::too_many_arguments)]
pub fn linear_gaussian_experiment(
    k: usize,
    d: usize,
    prior_gap: f64,
    sigma0: f64,
    sigma: f64,
    delta: f64,
    horizon: usize,
    runs: usize,
    seed: u64,
) -> Result<Experiment> {
    let prior = Prior::linear(linear_prior_mean(d, prior_gap), DMatrix::identity(d, d) * (sigma0 * sigma0))?;
    let exp = Experiment {
        action_set: make_linear_action_set(k, d, &action_set_stream(seed))?,
        noise: NoiseModel::LinearGaussian { sigma },
        policies: vec![PolicyConfig::bayes_ucb(prior.clone(), sigma, delta)?],
        prior,
        horizon,
        runs,
        seed,
        diagnostics: false,
        execution: Execution::default(),
    };
    exp.validate()?;
    Ok(exp)
}

/// What happened in one run of one policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RunDiagnostics {
    /// Cumulative regret after each round.
    pub cum_regret: Vec<f64>,
    /// Pull count of every action after the last round.
    pub pulls: Vec<usize>,
    /// Pulls made in rounds where every confidence interval held. Empty when
    /// diagnostics are off.
    pub pulls_on_event: Vec<usize>,
    /// Whether every confidence interval held in every round; `None` when
    /// diagnostics are off.
    pub all_confidence_held: Option<bool>,
    /// Per-round confidence events. Empty when diagnostics are off.
    pub event_held: Vec<bool>,
    /// `Σ_t ‖A_t‖²_{Σ̂_t}` for linear policies with diagnostics on.
    pub variance_ledger: Option<f64>,
}

impl RunDiagnostics {
    pub fn final_regret(&self) -> f64 {
        self.cum_regret.last().copied().unwrap_or(0.0)
    }
}

/// Generators for the per-arm reward streams of a run.
pub fn reward_rngs(rewards: &RngStream, num_actions: usize) -> Vec<StreamRng> {
    (0..num_actions).map(|a| rewards.substream(a as u64).rng()).collect()
}

/// Plays `policy` for `n` rounds on the environment.
pub fn run_episode(
    env: &Environment,
    policy: &PolicyConfig,
    n: usize,
    rewards: &RngStream,
    diagnostics: bool,
) -> Result<RunDiagnostics> {
    let instance = env.instance();
    let mut state = policy.init(instance.action_set())?;
    let k = instance.num_actions();
    let gaps = instance.gap_profile().gaps;
    let means = instance.means();
    let noise = env.noise();
    let mut rngs = reward_rngs(rewards, k);
    let linear = matches!(state, PolicyState::Linear(_));

    let mut cum_regret = Vec::with_capacity(n);
    let mut pulls = vec![0usize; k];
    let mut pulls_on_event = if diagnostics { vec![0usize; k] } else { Vec::new() };
    let mut event_held = Vec::with_capacity(if diagnostics { n } else { 0 });
    let mut all_held = true;
    let mut ledger = 0.0;
    let mut regret = 0.0;
    for _ in 0..n {
        let action = state.select_action();
        if diagnostics {
            let held = confidence_event_holds(&state, instance);
            event_held.push(held);
            all_held &= held;
            if held {
                pulls_on_event[action] += 1;
            }
            if linear {
                ledger += state.action_variance(action);
            }
        }
        let reward = noise.draw(means[action], &mut rngs[action]);
        state.update(action, reward)?;
        pulls[action] += 1;
        regret += gaps[action];
        cum_regret.push(regret);
    }
    Ok(RunDiagnostics {
        cum_regret,
        pulls,
        pulls_on_event,
        all_confidence_held: diagnostics.then_some(all_held),
        event_held,
        variance_ledger: (diagnostics && linear).then_some(ledger),
    })
}

/// Draws the instance of run `r` and plays every policy on it.
pub fn simulate_run(exp: &Experiment, run: usize) -> Result<(BanditInstance, Vec<RunDiagnostics>)> {
    let stream = exp.run_stream(run);
    let instance = sample_instance(&exp.prior, &exp.action_set, &stream.substream(INSTANCE_STREAM))?;
    let env = Environment::new(exp.noise, instance)?;
    let rewards = stream.substream(REWARD_STREAM);
    let runs = exp
        .policies
        .iter()
        .map(|p| run_episode(&env, p, exp.horizon, &rewards, exp.diagnostics))
        .collect::<Result<Vec<_>>>()?;
    Ok((env.instance().clone(), runs))
}

/// Calls `visit` for every run in run order. Runs are computed in parallel
/// waves according to the experiment's execution setting.
pub fn for_each_run<F>(exp: &Experiment, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &BanditInstance, &[RunDiagnostics]),
{
    exp.validate()?;
    let mut start = 0;
    while start < exp.runs {
        let len = WAVE.min(exp.runs - start);
        let wave = exec::map_indexed(exp.execution, len, |i| simulate_run(exp, start + i));
        for (i, outcome) in wave.into_iter().enumerate() {
            let (instance, diags) = outcome?;
            visit(start + i, &instance, &diags);
        }
        start += len;
    }
    Ok(())
}

/// Bayes regret of one policy.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub policy: String,
    /// Mean cumulative regret after each round.
    pub mean_cum_regret: Vec<f64>,
    /// Between-run standard error of each entry of `mean_cum_regret`.
    pub std_error: Vec<f64>,
    pub num_runs: usize,
}

impl ExperimentResult {
    pub fn final_regret(&self) -> f64 {
        self.mean_cum_regret.last().copied().unwrap_or(0.0)
    }

    pub fn final_std_error(&self) -> f64 {
        self.std_error.last().copied().unwrap_or(0.0)
    }
}

/// Paired comparison of final regret: `policies[first] − policies[second]`
/// averaged over runs, with the standard error of the per-run differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedComparison {
    pub first: usize,
    pub second: usize,
    pub mean_difference: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: Experiment,
    pub results: Vec<ExperimentResult>,
    /// One entry per ordered pair `first < second`.
    pub paired: Vec<PairedComparison>,
}

impl ExperimentReport {
    pub fn paired(&self, first: usize, second: usize) -> Option<&PairedComparison> {
        self.paired.iter().find(|p| p.first == first && p.second == second)
    }
}

/// Runs the experiment and aggregates per-round Bayes regret.
pub fn bayes_regret(exp: &Experiment) -> Result<ExperimentReport> {
    let m = exp.policies.len();
    let mut curves = vec![WelfordVec::new(exp.horizon); m];
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mut diffs = vec![Welford::new(); pairs.len()];
    for_each_run(exp, |_, _, diags| {
        for (curve, d) in curves.iter_mut().zip(diags) {
            curve.push(&d.cum_regret);
        }
        for (w, &(i, j)) in diffs.iter_mut().zip(&pairs) {
            w.push(diags[i].final_regret() - diags[j].final_regret());
        }
    })?;
    let results = exp
        .policies
        .iter()
        .zip(&curves)
        .map(|(p, c)| ExperimentResult {
            policy: p.variant.name().to_string(),
            mean_cum_regret: c.means(),
            std_error: c.std_errors(),
            num_runs: exp.runs,
        })
        .collect();
    let paired = pairs
        .iter()
        .zip(&diffs)
        .map(|(&(first, second), w)| PairedComparison {
            first,
            second,
            mean_difference: w.mean,
            std_error: w.std_error(),
        })
        .collect();
    Ok(ExperimentReport {
        experiment: exp.clone(),
        results,
        paired,
    })
}
