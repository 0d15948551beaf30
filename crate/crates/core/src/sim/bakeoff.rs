use super::{bayes_regret, karmed_gaussian_experiment};
use crate::environment::NoiseModel;
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::rng::splitmix64;

pub const BAKEOFF_K: [usize; 3] = [5, 10, 20];
pub const BAKEOFF_SIGMAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const BAKEOFF_GAPS: [f64; 3] = [0.5, 1.0, 2.0];
pub const BAKEOFF_SIGMA0: [f64; 3] = [0.5, 1.0, 2.0];

/// One configuration of the UCB1 versus BayesUCB comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BakeoffRow {
    pub k: usize,
    pub sigma: f64,
    pub prior_gap: f64,
    pub sigma0: f64,
    pub regret_ucb1: f64,
    pub regret_bayes_ucb: f64,
    /// Mean of per-run `regret_UCB1 − regret_BayesUCB`.
    pub difference: f64,
    /// Paired standard error of `difference`.
    pub std_error: f64,
}

/// Final-regret comparison on all 81 grid configurations, sorted by the
/// difference. `noise` must be Gaussian or Rademacher; its scale is ignored
/// and replaced by each row's σ. BayesUCB always assumes Gaussian noise.
pub fn bakeoff_grid(
    noise: NoiseModel,
    runs: usize,
    horizon: usize,
    seed: u64,
    execution: Execution,
) -> Result<Vec<BakeoffRow>> {
    let rademacher = match noise {
        NoiseModel::Gaussian { .. } => false,
        NoiseModel::Rademacher { .. } => true,
        other => return Err(invalid("noise", format!("bakeoff needs gaussian or rademacher noise, got {}", other.name()))),
    };
    let delta = 1.0 / horizon as f64;
    let mut rows = Vec::with_capacity(81);
    let mut index = 0u64;
    for &k in &BAKEOFF_K {
        for &sigma in &BAKEOFF_SIGMAS {
            for &prior_gap in &BAKEOFF_GAPS {
                for &sigma0 in &BAKEOFF_SIGMA0 {
                    let row_seed = splitmix64(seed ^ splitmix64(index));
                    index += 1;
                    let mut exp = karmed_gaussian_experiment(k, prior_gap, sigma0, sigma, delta, horizon, runs, row_seed)?
                        .with_execution(execution);
                    if rademacher {
                        exp.noise = NoiseModel::Rademacher { sigma };
                    }
                    let report = bayes_regret(&exp)?;
                    let pair = report.paired(0, 1).expect("two policies");
                    rows.push(BakeoffRow {
                        k,
                        sigma,
                        prior_gap,
                        sigma0,
                        regret_ucb1: report.results[1].final_regret(),
                        regret_bayes_ucb: report.results[0].final_regret(),
                        difference: -pair.mean_difference,
                        std_error: pair.std_error,
                    });
                }
            }
        }
    }
    rows.sort_by(|a, b| a.difference.total_cmp(&b.difference));
    Ok(rows)
}
