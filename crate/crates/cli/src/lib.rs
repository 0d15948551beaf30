//! Command-line front end: config files, CSV tables and SVG charts.

pub mod commands;
pub mod config;
pub mod csv;
mod error;
pub mod svg;

use std::path::PathBuf;

use bayes_ucb::sim::SweepParameter;
use clap::{Args, Parser, Subcommand};

pub use commands::{BakeoffSettings, Overrides};
pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "bayes-ucb", version, about = "BayesUCB and UCB1 simulations and regret bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Args, Default)]
pub struct Flags {
    /// Experiment config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// gaussian, rademacher or bernoulli.
    #[arg(long, global = true)]
    pub noise: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-round Bayes regret curves.
    Simulate,
    /// Final regret and bound series over a prior parameter grid.
    Sweep {
        /// sigma0 or prior_gap.
        #[arg(long)]
        parameter: Option<String>,
        /// Comma-separated grid values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        grid: Option<Vec<f64>>,
    },
    /// Every regret bound that applies to the config.
    Bounds,
    /// UCB1 versus BayesUCB on the 81-instance grid.
    Bakeoff,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            runs: self.runs,
            horizon: self.horizon,
            delta: self.delta,
            epsilon: self.epsilon,
            noise: self.noise.clone(),
            out: self.out.clone(),
        }
    }

    fn load(&self) -> CliResult<ExperimentConfig> {
        let path = self.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
        self.overrides().apply(ExperimentConfig::load(path)?)
    }
}

/// Runs a parsed command line; returns the files written.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let flags = &cli.flags;
    commands::with_thread_count(flags.threads, || match &cli.command {
        Command::Simulate => commands::cmd_simulate(&flags.load()?),
        Command::Sweep { parameter, grid } => {
            let parameter = parameter
                .as_deref()
                .map(|p| SweepParameter::parse(p).ok_or_else(|| CliError::Config(format!("unknown sweep parameter `{p}`"))))
                .transpose()?;
            commands::cmd_sweep(&flags.load()?, parameter, grid.clone())
        }
        Command::Bounds => commands::cmd_bounds(&flags.load()?),
        Command::Bakeoff => {
            let mut settings = BakeoffSettings::default();
            if let Some(path) = &flags.config {
                let cfg = ExperimentConfig::load(path)?;
                settings.runs = cfg.runs;
                settings.horizon = cfg.horizon;
                settings.seed = cfg.seed;
                settings.out = cfg.output_dir;
            }
            let o = flags.overrides();
            if o.delta.is_some() || o.epsilon.is_some() {
                return Err(CliError::Config("bakeoff always uses delta = 1/n".into()));
            }
            settings.noise = o.noise.unwrap_or(settings.noise);
            settings.runs = o.runs.unwrap_or(settings.runs);
            settings.horizon = o.horizon.unwrap_or(settings.horizon);
            settings.seed = o.seed.unwrap_or(settings.seed);
            settings.out = o.out.unwrap_or(settings.out);
            commands::cmd_bakeoff(&settings)
        }
    })?
}
