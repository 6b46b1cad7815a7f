use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use circular_filter::eval::{
    linspace, run_filtering_experiment, run_multiplication_experiment, run_propagation_experiment, summarize,
    write_csv, FilterKind, PropagationSampler, RunRecord, ScenarioConfig,
};

/// Benchmarks for recursive filtering on the circle.
#[derive(Parser)]
#[command(name = "circfilt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moment errors and KLD of deterministic samplers under x + c sin x.
    PropagateEval(PropagateArgs),
    /// KLD and L2 of WN product approximations against the true product.
    MultiplyEval(MultiplyArgs),
    /// Monte Carlo filtering runs; one CSV row per (run, filter).
    FilterEval(FilterArgs),
}

#[derive(Args)]
struct Output {
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn open(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }
}

#[derive(Args)]
struct PropagateArgs {
    /// Number of nonlinearity values, equispaced from 0 to --c-max.
    #[arg(long, default_value_t = 10)]
    c_points: usize,
    #[arg(long, default_value_t = 0.9)]
    c_max: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 1.5])]
    sigmas: Vec<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MultiplyArgs {
    #[arg(long, default_value_t = 0.0)]
    mu1: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.4, 1.0])]
    sigma1: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.5, 1.0])]
    sigma2: Vec<f64>,
    /// Points of the second mean over the circle.
    #[arg(long, default_value_t = 32)]
    mu2_points: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FilterArgs {
    /// Built-in scenario name, or `all`.
    #[arg(long, default_value = "all", conflicts_with = "config")]
    scenario: String,
    /// JSON scenario file; missing fields take the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "circular,ukf1d,ukf2d,pf10,pf100"
    )]
    filters: Vec<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    progression_threshold: Option<f64>,
    /// Print per-filter medians to standard error.
    #[arg(long)]
    summary: bool,
    #[command(flatten)]
    output: Output,
}

impl FilterArgs {
    fn scenarios(&self) -> Result<Vec<ScenarioConfig>> {
        let mut configs = if let Some(path) = &self.config {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            vec![serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?]
        } else if self.scenario == "all" {
            ScenarioConfig::BUILTIN_NAMES
                .iter()
                .map(|n| ScenarioConfig::builtin(n))
                .collect::<Result<_, _>>()?
        } else {
            vec![ScenarioConfig::builtin(&self.scenario)?]
        };
        for c in &mut configs {
            if let Some(v) = self.runs {
                c.runs = v;
            }
            if let Some(v) = self.seed {
                c.seed = v;
            }
            if let Some(v) = self.lambda {
                c.lambda = v;
            }
            if let Some(v) = self.progression_threshold {
                c.progression_threshold = v;
            }
            c.validate()?;
        }
        Ok(configs)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::PropagateEval(a) => {
            if !(0.0..1.0).contains(&a.c_max) {
                bail!("--c-max must lie in [0, 1)");
            }
            let rows = run_propagation_experiment(
                &linspace(0.0, a.c_max, a.c_points),
                &a.sigmas,
                &PropagationSampler::ALL,
            )?;
            write_csv(rows, a.output.open()?)?;
        }
        Command::MultiplyEval(a) => {
            if a.mu2_points == 0 {
                bail!("--mu2-points must be positive");
            }
            let rows = run_multiplication_experiment(a.mu1, &a.sigma1, &a.sigma2, a.mu2_points)?;
            write_csv(rows, a.output.open()?)?;
        }
        Command::FilterEval(a) => {
            let filters: Vec<FilterKind> = a.filters.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
            let mut records = Vec::new();
            let mut summaries = Vec::new();
            for config in a.scenarios()? {
                let results = run_filtering_experiment(&config, &filters)?;
                summaries.extend(summarize(&config.name, &results));
                records.push((config.name, results));
            }
            let rows = records
                .iter()
                .flat_map(|(name, rs)| rs.iter().map(move |r| RunRecord::new(name, r)));
            write_csv(rows, a.output.open()?)?;
            if a.summary {
                let mut err = io::stderr().lock();
                for s in summaries {
                    writeln!(
                        err,
                        "{:16} {:8} median {:.4} mean {:.4} failed {} stalls {} degenerate-runs {}",
                        s.scenario,
                        s.filter.name(),
                        s.median_rmse,
                        s.mean_rmse,
                        s.failed_runs,
                        s.progression_stalls,
                        s.degenerate_runs
                    )?;
                }
            }
        }
    }
    Ok(())
}
