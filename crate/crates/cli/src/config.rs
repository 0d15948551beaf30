//! Flat `section.key = value` experiment configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use bayes_ucb::bounds::{ComplexityTermSpec, XiMode, DEFAULT_MC_SAMPLES};
use bayes_ucb::exec::Execution;
use bayes_ucb::sim::{karmed_prior_means, linear_gaussian_experiment, Experiment, SweepParameter};
use bayes_ucb::{ActionSet, NoiseModel, PolicyConfig, Prior};

use crate::csv::fmt_f64;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Gaussian,
    Bernoulli,
    Linear,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::Bernoulli => "bernoulli",
            Family::Linear => "linear",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "gaussian" => Family::Gaussian,
            "bernoulli" => Family::Bernoulli,
            "linear" => Family::Linear,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Gaussian,
    Rademacher,
    Bernoulli,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::Rademacher => "rademacher",
            NoiseKind::Bernoulli => "bernoulli",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "gaussian" => NoiseKind::Gaussian,
            "rademacher" => NoiseKind::Rademacher,
            "bernoulli" => NoiseKind::Bernoulli,
            _ => return None,
        })
    }

    fn default_for(family: Family) -> Self {
        match family {
            Family::Bernoulli => NoiseKind::Bernoulli,
            _ => NoiseKind::Gaussian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    BayesUcb,
    Ucb1,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::BayesUcb => "BayesUCB",
            PolicyKind::Ucb1 => "UCB1",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bayesucb" | "bayes_ucb" => Some(PolicyKind::BayesUcb),
            "ucb1" => Some(PolicyKind::Ucb1),
            _ => None,
        }
    }
}

/// Everything needed to run, sweep or bound one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub k: usize,
    /// Feature dimension; linear family only.
    pub d: usize,
    pub sigma: f64,
    pub noise: NoiseKind,
    pub sigma0: f64,
    pub prior_gap: f64,
    /// Explicit Gaussian prior means, overriding `prior_gap`.
    pub prior_means: Option<Vec<f64>>,
    /// Beta prior parameters: one value for all arms, or one per arm.
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub policies: Vec<PolicyKind>,
    pub horizon: usize,
    pub runs: usize,
    /// `None` means `1/n`.
    pub delta: Option<f64>,
    /// `None` means `1/n`.
    pub epsilon: Option<f64>,
    pub seed: u64,
    pub bound_samples: usize,
    pub xi_mode: XiMode,
    /// Bound rows to report; empty means all.
    pub bound_list: Vec<String>,
    pub sweep_parameter: Option<SweepParameter>,
    pub sweep_grid: Vec<f64>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            family: Family::Gaussian,
            k: 10,
            d: 10,
            sigma: 1.0,
            noise: NoiseKind::Gaussian,
            sigma0: 1.0,
            prior_gap: 1.0,
            prior_means: None,
            alpha: vec![1.0],
            beta: vec![1.0],
            policies: vec![PolicyKind::BayesUcb, PolicyKind::Ucb1],
            horizon: 1000,
            runs: 10_000,
            delta: None,
            epsilon: None,
            seed: 0,
            bound_samples: DEFAULT_MC_SAMPLES,
            xi_mode: XiMode::Asymptotic,
            bound_list: Vec::new(),
            sweep_parameter: None,
            sweep_grid: Vec::new(),
            output_dir: PathBuf::from("out"),
        }
    }
}

const KEYS: &[&str] = &[
    "environment.family",
    "environment.K",
    "environment.d",
    "environment.sigma",
    "environment.noise",
    "prior.sigma0",
    "prior.gap",
    "prior.means",
    "prior.alpha",
    "prior.beta",
    "policies",
    "run.horizon",
    "run.runs",
    "run.delta",
    "run.epsilon",
    "run.seed",
    "bounds.samples",
    "bounds.xi_mode",
    "bounds.list",
    "sweep.parameter",
    "sweep.grid",
    "output.dir",
];

fn parse_xi_mode(s: &str) -> Option<XiMode> {
    [XiMode::Asymptotic, XiMode::RangeSupremum].into_iter().find(|m| m.name() == s)
}

fn list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses and validates a config; keys not present keep their defaults.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        let mut noise_given = false;
        let mut policies_given = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| CliError::Parse { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(err(format!("unknown key `{key}`")));
            };
            if seen.contains(&known) {
                return Err(err(format!("duplicate key `{key}`")));
            }
            seen.push(known);
            let num = |v: &str| v.parse::<f64>().map_err(|_| err(format!("`{key}` expects a number, got `{v}`")));
            let int = |v: &str| v.parse::<usize>().map_err(|_| err(format!("`{key}` expects an integer, got `{v}`")));
            let nums = |v: &str| list(v).map(num).collect::<CliResult<Vec<f64>>>();
            match known {
                "environment.family" => {
                    cfg.family = Family::parse(value).ok_or_else(|| err(format!("unknown family `{value}`")))?
                }
                "environment.K" => cfg.k = int(value)?,
                "environment.d" => cfg.d = int(value)?,
                "environment.sigma" => cfg.sigma = num(value)?,
                "environment.noise" => {
                    noise_given = true;
                    cfg.noise = NoiseKind::parse(value).ok_or_else(|| err(format!("unknown noise kind `{value}`")))?
                }
                "prior.sigma0" => cfg.sigma0 = num(value)?,
                "prior.gap" => cfg.prior_gap = num(value)?,
                "prior.means" => cfg.prior_means = Some(nums(value)?),
                "prior.alpha" => cfg.alpha = nums(value)?,
                "prior.beta" => cfg.beta = nums(value)?,
                "policies" => {
                    policies_given = true;
                    cfg.policies = list(value)
                        .map(|p| PolicyKind::parse(p).ok_or_else(|| err(format!("unknown policy `{p}`"))))
                        .collect::<CliResult<_>>()?
                }
                "run.horizon" => cfg.horizon = int(value)?,
                "run.runs" => cfg.runs = int(value)?,
                "run.delta" => cfg.delta = Some(num(value)?),
                "run.epsilon" => cfg.epsilon = Some(num(value)?),
                "run.seed" => {
                    cfg.seed = value.parse().map_err(|_| err(format!("`run.seed` expects a u64, got `{value}`")))?
                }
                "bounds.samples" => cfg.bound_samples = int(value)?,
                "bounds.xi_mode" => {
                    cfg.xi_mode = parse_xi_mode(value).ok_or_else(|| err(format!("unknown xi mode `{value}`")))?
                }
                "bounds.list" => cfg.bound_list = list(value).map(String::from).collect(),
                "sweep.parameter" => {
                    cfg.sweep_parameter = Some(
                        SweepParameter::parse(value).ok_or_else(|| err(format!("unknown sweep parameter `{value}`")))?,
                    )
                }
                "sweep.grid" => cfg.sweep_grid = nums(value)?,
                "output.dir" => cfg.output_dir = PathBuf::from(value),
                _ => unreachable!(),
            }
        }
        if !noise_given {
            cfg.noise = NoiseKind::default_for(cfg.family);
        }
        if !policies_given && cfg.family != Family::Gaussian {
            cfg.policies = vec![PolicyKind::BayesUcb];
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Writes every key; `parse(serialize(c)) == c` for valid configs.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("environment.family", self.family.name().into());
        kv("environment.K", self.k.to_string());
        kv("environment.d", self.d.to_string());
        kv("environment.sigma", fmt_f64(self.sigma));
        kv("environment.noise", self.noise.name().into());
        kv("prior.sigma0", fmt_f64(self.sigma0));
        kv("prior.gap", fmt_f64(self.prior_gap));
        if let Some(m) = &self.prior_means {
            kv("prior.means", join_f64(m));
        }
        kv("prior.alpha", join_f64(&self.alpha));
        kv("prior.beta", join_f64(&self.beta));
        kv("policies", self.policies.iter().map(|p| p.name()).collect::<Vec<_>>().join(","));
        kv("run.horizon", self.horizon.to_string());
        kv("run.runs", self.runs.to_string());
        if let Some(d) = self.delta {
            kv("run.delta", fmt_f64(d));
        }
        if let Some(e) = self.epsilon {
            kv("run.epsilon", fmt_f64(e));
        }
        kv("run.seed", self.seed.to_string());
        kv("bounds.samples", self.bound_samples.to_string());
        kv("bounds.xi_mode", self.xi_mode.name().into());
        kv("bounds.list", self.bound_list.join(","));
        if let Some(p) = self.sweep_parameter {
            kv("sweep.parameter", p.name().into());
        }
        kv("sweep.grid", join_f64(&self.sweep_grid));
        kv("output.dir", self.output_dir.display().to_string());
        out
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(1.0 / self.horizon as f64)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(1.0 / self.horizon as f64)
    }

    pub fn complexity_spec(&self) -> CliResult<ComplexityTermSpec> {
        ComplexityTermSpec::new(self.xi_mode, self.bound_samples).map_err(CliError::config)
    }

    /// Checks field ranges and that the experiment can be built.
    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.k == 0 {
            return bad("environment.K must be >= 1".into());
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad(format!("environment.sigma must be > 0, got {}", self.sigma));
        }
        if self.horizon == 0 || self.runs == 0 || self.bound_samples == 0 {
            return bad("run.horizon, run.runs and bounds.samples must be >= 1".into());
        }
        let delta = self.delta();
        if !(delta > 0.0 && delta < 1.0) {
            return bad(format!("run.delta must lie in (0, 1), got {delta}"));
        }
        let eps = self.epsilon();
        if !(eps.is_finite() && eps > 0.0) {
            return bad(format!("run.epsilon must be > 0, got {eps}"));
        }
        if self.policies.is_empty() {
            return bad("policies must name at least one policy".into());
        }
        let noise_ok = matches!(
            (self.family, self.noise),
            (Family::Gaussian, NoiseKind::Gaussian | NoiseKind::Rademacher)
                | (Family::Bernoulli, NoiseKind::Bernoulli)
                | (Family::Linear, NoiseKind::Gaussian)
        );
        if !noise_ok {
            return bad(format!("noise `{}` does not fit family `{}`", self.noise.name(), self.family.name()));
        }
        if self.family == Family::Linear && self.policies.contains(&PolicyKind::Ucb1) {
            return bad("UCB1 is only defined for K-armed bandits".into());
        }
        if self.family == Family::Bernoulli {
            for (name, v) in [("prior.alpha", &self.alpha), ("prior.beta", &self.beta)] {
                if v.len() != 1 && v.len() != self.k {
                    return bad(format!("{name} needs 1 or K = {} values, got {}", self.k, v.len()));
                }
            }
        }
        if let Some(m) = &self.prior_means {
            if self.family != Family::Gaussian || m.len() != self.k {
                return bad("prior.means needs the gaussian family and exactly K values".into());
            }
        }
        if let Some(p) = self.sweep_parameter {
            if self.family == Family::Bernoulli {
                return bad(format!("sweep over {} needs a Gaussian or linear prior", p.name()));
            }
        }
        self.complexity_spec()?;
        self.experiment()?;
        Ok(())
    }

    pub fn prior(&self) -> CliResult<Prior> {
        let prior = match self.family {
            Family::Gaussian => {
                let means = self.prior_means.clone().unwrap_or_else(|| karmed_prior_means(self.k, self.prior_gap));
                Prior::gaussian(means, self.sigma0)
            }
            Family::Bernoulli => {
                let expand = |v: &[f64]| if v.len() == 1 { vec![v[0]; self.k] } else { v.to_vec() };
                Prior::beta(expand(&self.alpha), expand(&self.beta))
            }
            Family::Linear => return self.experiment().map(|e| e.prior),
        };
        prior.map_err(CliError::config)
    }

    /// The experiment described by this config.
    pub fn experiment(&self) -> CliResult<Experiment> {
        let delta = self.delta();
        let exp = match self.family {
            Family::Linear => linear_gaussian_experiment(
                self.k,
                self.d,
                self.prior_gap,
                self.sigma0,
                self.sigma,
                delta,
                self.horizon,
                self.runs,
                self.seed,
            ),
            Family::Gaussian | Family::Bernoulli => {
                let prior = self.prior()?;
                let noise = match self.noise {
                    NoiseKind::Gaussian => NoiseModel::Gaussian { sigma: self.sigma },
                    NoiseKind::Rademacher => NoiseModel::Rademacher { sigma: self.sigma },
                    NoiseKind::Bernoulli => NoiseModel::Bernoulli,
                };
                let policies = self
                    .policies
                    .iter()
                    .map(|p| match p {
                        PolicyKind::BayesUcb => PolicyConfig::bayes_ucb(prior.clone(), self.sigma, delta),
                        PolicyKind::Ucb1 => PolicyConfig::ucb1(self.sigma, delta),
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(CliError::config)?;
                ActionSet::indexed(self.k).and_then(|action_set| {
                    let exp = Experiment {
                        prior,
                        action_set,
                        noise,
                        policies,
                        horizon: self.horizon,
                        runs: self.runs,
                        seed: self.seed,
                        diagnostics: false,
                        execution: Execution::default(),
                    };
                    exp.validate().map(|_| exp)
                })
            }
        };
        exp.map_err(CliError::config)
    }
}
