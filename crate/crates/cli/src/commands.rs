//! The four CLI commands.

use std::path::{Path, PathBuf};

use bayes_ucb::bounds::{
    appendix_c_small_sigma0_bound, complexity_term, corollary2_bound, lemma3_upper_bound, lemma8_variance_budget,
    sqrt_bound_karmed, sqrt_bound_linear, thm1_leading_term, thm4_ucb1_bound, thm5_gap_dependent, thm5_prior_dependent,
    thm6_linear_bound, two_arm_complexity_closed_form, ucb1_leading_term, BoundEstimate, ComplexityTermSpec,
    LinearBoundParams, Sampling, XiMode,
};
use bayes_ucb::exec::{self, Execution};
use bayes_ucb::linalg::max_eigenvalue;
use bayes_ucb::sim::{apply_parameter, bakeoff_grid, bayes_regret, sweep, BakeoffRow, BoundSettings, SweepParameter};
use bayes_ucb::{ActionSet, Error, NoiseModel, Prior};

use crate::config::{ExperimentConfig, Family, NoiseKind};
use crate::csv::{fmt_f64, CsvTable};
use crate::error::{CliError, CliResult};
use crate::svg::{LineChart, Series};

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub horizon: Option<usize>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub noise: Option<String>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Applies the overrides and revalidates.
    pub fn apply(&self, mut cfg: ExperimentConfig) -> CliResult<ExperimentConfig> {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.runs {
            cfg.runs = r;
        }
        if let Some(h) = self.horizon {
            cfg.horizon = h;
        }
        if let Some(d) = self.delta {
            cfg.delta = Some(d);
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = Some(e);
        }
        if let Some(n) = &self.noise {
            cfg.noise = parse_noise(n)?;
        }
        if let Some(o) = &self.out {
            cfg.output_dir = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_noise(s: &str) -> CliResult<NoiseKind> {
    NoiseKind::parse(s).ok_or_else(|| CliError::Config(format!("unknown noise kind `{s}`")))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_thread_count<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> CliResult<R> {
    match threads {
        Some(0) => Err(CliError::Config("--threads must be >= 1".into())),
        Some(t) => Ok(exec::with_threads(t, f)),
        None => Ok(f()),
    }
}

/// Per-round Bayes regret of every policy. Returns the written paths.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    let exp = cfg.experiment()?;
    let report = bayes_regret(&exp)?;
    let mut table = CsvTable::new(&["round", "policy", "mean_cum_regret", "std_error"]);
    let mut chart = LineChart {
        title: format!("Bayes regret, {} runs", cfg.runs),
        x_label: "round n".into(),
        y_label: "cumulative regret".into(),
        ..Default::default()
    };
    for r in &report.results {
        for (t, (m, se)) in r.mean_cum_regret.iter().zip(&r.std_error).enumerate() {
            table.push(vec![(t + 1).to_string(), r.policy.clone(), fmt_f64(*m), fmt_f64(*se)]);
        }
        let points = r.mean_cum_regret.iter().enumerate().map(|(t, &m)| ((t + 1) as f64, m)).collect();
        chart.series.push(Series::new(r.policy.clone(), points).with_band(r.std_error.clone()));
    }
    Ok(vec![
        write_file(&cfg.output_dir, "regret_curves.csv", &table.render())?,
        write_file(&cfg.output_dir, "regret_curves.svg", &chart.render())?,
    ])
}

/// Regret and bound series over a grid of one prior parameter.
pub fn cmd_sweep(
    cfg: &ExperimentConfig,
    parameter: Option<SweepParameter>,
    grid: Option<Vec<f64>>,
) -> CliResult<Vec<PathBuf>> {
    let parameter = parameter
        .or(cfg.sweep_parameter)
        .ok_or_else(|| CliError::Config("no sweep parameter given".into()))?;
    let grid = grid.unwrap_or_else(|| cfg.sweep_grid.clone());
    if grid.is_empty() {
        return Err(CliError::Config("sweep grid is empty".into()));
    }
    let base = cfg.experiment()?;
    for &v in &grid {
        apply_parameter(&base, parameter, v).map_err(CliError::config)?;
    }
    let settings = BoundSettings {
        delta: cfg.delta(),
        epsilon: cfg.epsilon(),
        samples: cfg.bound_samples,
        sampling: Sampling::for_seed(cfg.seed),
    };
    let points = sweep(&base, parameter, &grid, &settings)?;

    let mut table = CsvTable::new(&["grid_value", "series_name", "value", "std_error"]);
    // (name, points, standard errors)
    type Curve = (String, Vec<(f64, f64)>, Vec<f64>);
    let mut series: Vec<Curve> = Vec::new();
    let mut record = |name: &str, x: f64, y: f64, se: f64, table: &mut CsvTable| {
        table.push(vec![fmt_f64(x), name.to_string(), fmt_f64(y), fmt_f64(se)]);
        match series.iter_mut().find(|s| s.0 == name) {
            Some(s) => {
                s.1.push((x, y));
                s.2.push(se);
            }
            None => series.push((name.to_string(), vec![(x, y)], vec![se])),
        }
    };
    for p in &points {
        for r in &p.report.results {
            record(&r.policy, p.value, r.final_regret(), r.final_std_error(), &mut table);
        }
        for (name, b) in &p.bounds {
            let y = b.component("leading").unwrap_or(b.value);
            record(name, p.value, y, b.std_error, &mut table);
        }
    }
    let all_positive = series.iter().all(|s| s.1.iter().all(|&(_, y)| y > 0.0));
    let chart = LineChart {
        title: format!("Regret and bounds over {}", parameter.name()),
        x_label: parameter.name().into(),
        y_label: "regret".into(),
        log_x: parameter == SweepParameter::Sigma0 && grid.iter().all(|&g| g > 0.0),
        log_y: all_positive,
        series: series.into_iter().map(|(n, pts, se)| Series::new(n, pts).with_band(se)).collect(),
        reference_y: None,
    };
    Ok(vec![
        write_file(&cfg.output_dir, "sweep.csv", &table.render())?,
        write_file(&cfg.output_dir, "sweep.svg", &chart.render())?,
    ])
}

/// A row of the bounds report: the estimate, or why it is missing.
pub type BoundRow = (String, Result<BoundEstimate, Error>);

/// Names of the bound rows available for a family.
pub fn bound_names(family: Family) -> &'static [&'static str] {
    match family {
        Family::Gaussian => &[
            "thm1",
            "ucb1_leading",
            "complexity_term_asymptotic",
            "complexity_term_range_supremum",
            "lemma3",
            "two_arm_closed_form",
            "corollary2",
            "appendix_c",
            "thm4",
            "sqrt_karmed",
        ],
        Family::Bernoulli => &[
            "thm5_gap_dependent",
            "thm5_prior_dependent",
            "complexity_term_asymptotic",
            "complexity_term_range_supremum",
        ],
        Family::Linear => &["thm6", "sqrt_linear", "lemma8_budget"],
    }
}

/// Evaluates every requested bound; failures are kept as rows.
pub fn evaluate_bounds(cfg: &ExperimentConfig) -> CliResult<Vec<BoundRow>> {
    let names = bound_names(cfg.family);
    for name in &cfg.bound_list {
        if !names.contains(&name.as_str()) {
            return Err(CliError::Config(format!(
                "unknown bound `{name}` for family {}; available: {}",
                cfg.family.name(),
                names.join(",")
            )));
        }
    }
    let selected: Vec<&str> = names
        .iter()
        .copied()
        .filter(|n| cfg.bound_list.is_empty() || cfg.bound_list.iter().any(|b| b == n))
        .collect();
    let exp = cfg.experiment()?;
    let prior = &exp.prior;
    let (sigma, delta, eps, n, samples) = (cfg.sigma, cfg.delta(), cfg.epsilon(), cfg.horizon as u64, cfg.bound_samples);
    let sampling = Sampling::for_seed(cfg.seed);
    let spec = cfg.complexity_spec()?;
    let mode_spec = |mode| ComplexityTermSpec::new(mode, samples);
    let sigma0max = || -> Result<f64, Error> {
        match (prior, &exp.action_set) {
            (Prior::LinearGaussian { cov, .. }, ActionSet::Featurized { norm_bound, .. }) => {
                Ok(max_eigenvalue(cov)?.max(0.0).sqrt() * norm_bound)
            }
            _ => Err(Error::Unsupported("linear bounds", "linear Gaussian prior")),
        }
    };
    let rows = selected
        .into_iter()
        .map(|name| {
            let est = match name {
                "thm1" => thm1_leading_term(prior, sigma, delta, eps, n, samples, &sampling),
                "ucb1_leading" => ucb1_leading_term(prior, sigma, delta, eps, samples, &sampling),
                "complexity_term_asymptotic" => {
                    mode_spec(XiMode::Asymptotic).and_then(|s| complexity_term(prior, &s, n, &sampling))
                }
                "complexity_term_range_supremum" => {
                    mode_spec(XiMode::RangeSupremum).and_then(|s| complexity_term(prior, &s, n, &sampling))
                }
                "lemma3" => lemma3_upper_bound(prior),
                "two_arm_closed_form" => two_arm_complexity_closed_form(prior).map(BoundEstimate::exact),
                "corollary2" => corollary2_bound(prior, sigma, delta, n, &spec, &sampling),
                "appendix_c" => appendix_c_small_sigma0_bound(cfg.sigma0, delta, n, cfg.k),
                "thm4" => thm4_ucb1_bound(prior, sigma, delta, n, &spec, &sampling),
                "sqrt_karmed" => sqrt_bound_karmed(sigma, cfg.sigma0, cfg.k, n),
                "thm5_gap_dependent" => thm5_gap_dependent(prior, delta, eps, n, samples, &sampling),
                "thm5_prior_dependent" => thm5_prior_dependent(prior, delta, n, &spec, &sampling),
                "thm6" => {
                    let params = LinearBoundParams { sigma, delta, epsilon: eps, n, samples };
                    thm6_linear_bound(prior, &exp.action_set, &params, &sampling)
                }
                "sqrt_linear" => sigma0max().and_then(|s0| sqrt_bound_linear(sigma, s0, cfg.d, n, delta)),
                "lemma8_budget" => {
                    sigma0max().and_then(|s0| lemma8_variance_budget(sigma, s0, cfg.d, n)).map(BoundEstimate::exact)
                }
                _ => unreachable!("bound names are checked above"),
            };
            (name.to_string(), est)
        })
        .collect();
    Ok(rows)
}

/// Status marker of a bound row.
pub fn bound_status(row: &Result<BoundEstimate, Error>) -> String {
    match row {
        Ok(_) => "ok".into(),
        Err(Error::Precondition { reason, .. }) if reason.starts_with("use_appendix_c") => "use_appendix_c".into(),
        Err(Error::Precondition { reason, .. }) => format!("not_applicable: {reason}"),
        Err(e) => format!("error: {e}"),
    }
}

fn pairs(kv: &[(String, f64)]) -> impl Iterator<Item = String> + '_ {
    kv.iter().map(|(k, v)| format!("{k}={}", fmt_f64(*v)))
}

/// Every bound of the config, one CSV row each.
pub fn cmd_bounds(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    let rows = evaluate_bounds(cfg)?;
    let mut table = CsvTable::new(&["bound", "value", "std_error", "num_samples", "components", "status"]);
    for (name, est) in &rows {
        let status = bound_status(est);
        let cells = match est {
            Ok(b) => vec![
                name.clone(),
                fmt_f64(b.value),
                fmt_f64(b.std_error),
                b.num_samples.to_string(),
                pairs(&b.components).chain(pairs(&b.details)).collect::<Vec<_>>().join(";"),
                status,
            ],
            Err(_) => vec![name.clone(), String::new(), String::new(), String::new(), String::new(), status],
        };
        table.push(cells);
    }
    Ok(vec![write_file(&cfg.output_dir, "bounds.csv", &table.render())?])
}

/// Settings of the bakeoff command.
#[derive(Debug, Clone, PartialEq)]
pub struct BakeoffSettings {
    pub noise: String,
    pub runs: usize,
    pub horizon: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for BakeoffSettings {
    fn default() -> Self {
        Self {
            noise: "gaussian".into(),
            runs: 1000,
            horizon: 1000,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

pub fn bakeoff_rows(settings: &BakeoffSettings) -> CliResult<Vec<BakeoffRow>> {
    let noise = match parse_noise(&settings.noise)? {
        NoiseKind::Gaussian => NoiseModel::Gaussian { sigma: 1.0 },
        NoiseKind::Rademacher => NoiseModel::Rademacher { sigma: 1.0 },
        NoiseKind::Bernoulli => {
            return Err(CliError::Config("bakeoff noise must be gaussian or rademacher".into()));
        }
    };
    if settings.runs == 0 || settings.horizon < 2 {
        return Err(CliError::Config("bakeoff needs runs >= 1 and horizon >= 2".into()));
    }
    Ok(bakeoff_grid(noise, settings.runs, settings.horizon, settings.seed, Execution::Parallel)?)
}

/// UCB1 minus BayesUCB regret on the 81-instance grid, sorted by difference.
pub fn cmd_bakeoff(settings: &BakeoffSettings) -> CliResult<Vec<PathBuf>> {
    let rows = bakeoff_rows(settings)?;
    let mut table = CsvTable::new(&[
        "rank",
        "K",
        "sigma",
        "prior_gap",
        "sigma0",
        "regret_ucb1",
        "regret_bayes_ucb",
        "difference",
        "std_error",
    ]);
    for (i, r) in rows.iter().enumerate() {
        table.push(vec![
            (i + 1).to_string(),
            r.k.to_string(),
            fmt_f64(r.sigma),
            fmt_f64(r.prior_gap),
            fmt_f64(r.sigma0),
            fmt_f64(r.regret_ucb1),
            fmt_f64(r.regret_bayes_ucb),
            fmt_f64(r.difference),
            fmt_f64(r.std_error),
        ]);
    }
    let points = rows.iter().enumerate().map(|(i, r)| ((i + 1) as f64, r.difference)).collect();
    let chart = LineChart {
        title: format!("UCB1 minus BayesUCB regret, {} noise", settings.noise),
        x_label: "instance (sorted)".into(),
        y_label: "regret difference".into(),
        series: vec![Series::new("UCB1 - BayesUCB", points).with_band(rows.iter().map(|r| r.std_error).collect())],
        reference_y: Some(0.0),
        ..Default::default()
    };
    let stem = format!("bakeoff_{}", settings.noise);
    Ok(vec![
        write_file(&settings.out, &format!("{stem}.csv"), &table.render())?,
        write_file(&settings.out, &format!("{stem}.svg"), &chart.render())?,
    ])
}
