use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use nalgebra::{Matrix2, Vector2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::metrics::{angular_distance, median};
use crate::baseline::{ParticleSet, Ukf1d, Ukf2d};
use crate::distributions::{CircularDistribution, RandomDraw, WrappedNormal};
use crate::error::{domain, Error, Result};
use crate::filter::{
    make_additive_likelihood, predict_arbitrary, predict_nonlinear_additive, unit_circle, update_progressive,
    DiscreteNoise, FilterState, GaussianNoise2, ProgressionTrace,
};
use crate::sampling::Sampler;

/// Tolerance on `|Σλ - 1|` and on the relative ratio shortfall when
/// auditing progressive updates.
pub const PROGRESSION_AUDIT_TOL: f64 = 1e-9;

/// Number of independent random streams reserved per run.
const STREAMS_PER_RUN: u64 = 4;

/// How the system noise enters the transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKind {
    /// `x + c1 sin x + c2 + w`.
    Additive,
    /// `x + c1 sin(x + w) + c2`.
    NonAdditive,
}

/// One filtering scenario. The built-in names fix `system` and `eta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub name: String,
    pub system: SystemKind,
    pub c1: f64,
    pub c2: f64,
    /// Standard deviation of the wrapped normal system noise.
    pub system_noise_sigma: f64,
    /// Measurement noise covariance is `eta · I`.
    pub eta: f64,
    pub k_max: usize,
    pub runs: usize,
    pub init_mu: f64,
    pub init_sigma: f64,
    pub true_initial: f64,
    pub progression_threshold: f64,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            name: "m".into(),
            system: SystemKind::Additive,
            c1: 0.1,
            c2: 0.15,
            system_noise_sigma: 0.2,
            eta: 0.1,
            k_max: 100,
            runs: 100,
            init_mu: 0.0,
            init_sigma: 1.0,
            true_initial: PI,
            progression_threshold: 0.2,
            lambda: 0.5,
            seed: 20150701,
        }
    }
}

impl ScenarioConfig {
    pub const BUILTIN_NAMES: [&'static str; 6] = [
        "s",
        "m",
        "l",
        "s-non-additive",
        "m-non-additive",
        "l-non-additive",
    ];

    /// The scenario table: noise level from the size prefix, system kind
    /// from the suffix.
    pub fn builtin(name: &str) -> Result<Self> {
        let (size, system) = match name.strip_suffix("-non-additive") {
            Some(s) => (s, SystemKind::NonAdditive),
            None => (name, SystemKind::Additive),
        };
        let eta = match size {
            "s" => 0.01,
            "m" => 0.1,
            "l" => 3.0,
            _ => return domain(format!("unknown scenario {name:?}")),
        };
        Ok(ScenarioConfig {
            name: name.into(),
            system,
            eta,
            ..Default::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("system_noise_sigma", self.system_noise_sigma),
            ("eta", self.eta),
            ("init_sigma", self.init_sigma),
        ];
        for (what, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("{what} must be positive and finite, got {v}"));
            }
        }
        if self.k_max == 0 || self.runs == 0 {
            return domain("k_max and runs must be at least 1");
        }
        if !(self.progression_threshold > 0.0 && self.progression_threshold < 1.0) {
            return domain("progression threshold must lie in (0, 1)");
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return domain("lambda must lie in [0, 1]");
        }
        Ok(())
    }

    /// Transition `a(x, w)`.
    pub fn transition(&self) -> impl Fn(f64, f64) -> f64 + Copy + Send + Sync {
        let (c1, c2, kind) = (self.c1, self.c2, self.system);
        move |x, w| match kind {
            SystemKind::Additive => x + c1 * x.sin() + c2 + w,
            SystemKind::NonAdditive => x + c1 * (x + w).sin() + c2,
        }
    }

    /// Deterministic part of the additive transition.
    pub fn additive_part(&self) -> impl Fn(f64) -> f64 + Copy + Send + Sync {
        let (c1, c2) = (self.c1, self.c2);
        move |x| x + c1 * x.sin() + c2
    }

    pub fn system_noise(&self) -> Result<WrappedNormal> {
        WrappedNormal::new(0.0, self.system_noise_sigma)
    }

    pub fn prior(&self) -> Result<WrappedNormal> {
        WrappedNormal::new(self.init_mu, self.init_sigma)
    }

    /// Filters that are meaningful for this scenario: the UKF variants
    /// need additive noise.
    pub fn supports(&self, kind: FilterKind) -> bool {
        !matches!(kind, FilterKind::Ukf1d | FilterKind::Ukf2d) || self.system == SystemKind::Additive
    }
}

/// Estimators compared in the filtering experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FilterKind {
    #[serde(rename = "circular")]
    Circular,
    #[serde(rename = "ukf1d")]
    Ukf1d,
    #[serde(rename = "ukf2d")]
    Ukf2d,
    #[serde(rename = "pf10")]
    Pf10,
    #[serde(rename = "pf100")]
    Pf100,
}

impl FilterKind {
    pub const ALL: [FilterKind; 5] = [Self::Circular, Self::Ukf1d, Self::Ukf2d, Self::Pf10, Self::Pf100];

    pub fn name(self) -> &'static str {
        match self {
            Self::Circular => "circular",
            Self::Ukf1d => "ukf1d",
            Self::Ukf2d => "ukf2d",
            Self::Pf10 => "pf10",
            Self::Pf100 => "pf100",
        }
    }

    fn particles(self) -> Option<usize> {
        match self {
            Self::Pf10 => Some(10),
            Self::Pf100 => Some(100),
            _ => None,
        }
    }

    fn stream(self) -> u64 {
        match self {
            Self::Pf10 => 1,
            Self::Pf100 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown filter {s:?}")))
    }
}

/// Audit of every progressive update performed in one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProgressionStats {
    pub updates: usize,
    pub steps: usize,
    /// Largest `|Σλ - 1|` over all updates.
    pub max_sum_error: f64,
    /// Smallest post-reweigh min/max weight ratio over all steps.
    pub min_ratio: f64,
    /// Updates that stopped on a nonpositive step bound.
    pub stalls: usize,
    /// Completed updates violating the contract at
    /// [`PROGRESSION_AUDIT_TOL`], plus stalled ones.
    pub violations: usize,
}

impl Default for ProgressionStats {
    fn default() -> Self {
        ProgressionStats {
            updates: 0,
            steps: 0,
            max_sum_error: 0.0,
            min_ratio: 1.0,
            stalls: 0,
            violations: 0,
        }
    }
}

impl ProgressionStats {
    fn record(&mut self, trace: &ProgressionTrace, r: f64) {
        self.updates += 1;
        self.steps += trace.steps();
        self.max_sum_error = self.max_sum_error.max((trace.total() - 1.0).abs());
        for &q in &trace.weight_ratios {
            self.min_ratio = self.min_ratio.min(q);
        }
        if !trace.satisfies(r, PROGRESSION_AUDIT_TOL) {
            self.violations += 1;
        }
    }
}

/// Outcome of one filter on one simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub filter: FilterKind,
    pub run: usize,
    /// Angular error after each update; shorter than `k_max` on failure.
    pub errors: Vec<f64>,
    /// Angular RMSE; `π` (the largest possible) if the filter failed.
    pub rmse: f64,
    /// Particle updates flagged as degenerate.
    pub degenerate_steps: usize,
    pub failure: Option<Error>,
    pub progression: Option<ProgressionStats>,
    pub wall_time: Duration,
}

/// Simulated ground truth and measurements of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `x_1 .. x_kmax`.
    pub states: Vec<f64>,
    pub measurements: Vec<[f64; 2]>,
}

/// Random stream `purpose` of run `run` under `seed`.
pub fn run_rng(seed: u64, run: usize, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64 * STREAMS_PER_RUN + purpose);
    rng
}

/// Ground truth from `true_initial` and noisy unit-vector measurements.
pub fn simulate(config: &ScenarioConfig, run: usize) -> Result<Trajectory> {
    let mut rng = run_rng(config.seed, run, 0);
    let noise = config.system_noise()?;
    let meas = Normal::new(0.0, config.eta.sqrt()).map_err(|e| Error::Domain(e.to_string()))?;
    let a = config.transition();
    let mut x = config.true_initial;
    let mut states = Vec::with_capacity(config.k_max);
    let mut measurements = Vec::with_capacity(config.k_max);
    for _ in 0..config.k_max {
        x = crate::distributions::wrap_angle(a(x, noise.draw(&mut rng)));
        let [c, s] = unit_circle(x);
        states.push(x);
        measurements.push([c + meas.sample(&mut rng), s + meas.sample(&mut rng)]);
    }
    Ok(Trajectory { states, measurements })
}

/// One filter's estimator state.
enum Estimator {
    Circular(FilterState),
    Ukf1d(Ukf1d),
    Ukf2d(Ukf2d),
    Particles(ParticleSet, ChaCha8Rng),
}

struct StepOutcome {
    degenerate: bool,
    trace: Option<ProgressionTrace>,
}

struct Runner<'a> {
    config: &'a ScenarioConfig,
    sampler: Sampler,
    noise: WrappedNormal,
    noise_samples: DiscreteNoise,
    meas_noise: GaussianNoise2,
}

impl<'a> Runner<'a> {
    fn new(config: &'a ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let sampler = Sampler::wd5(config.lambda);
        let noise = config.system_noise()?;
        Ok(Runner {
            config,
            sampler,
            noise,
            noise_samples: DiscreteNoise::from_circular(&CircularDistribution::from(noise), &sampler)?,
            meas_noise: GaussianNoise2::isotropic(config.eta)?,
        })
    }

    fn init(&self, kind: FilterKind, run: usize) -> Result<Estimator> {
        let prior = self.config.prior()?;
        Ok(match kind {
            FilterKind::Circular => Estimator::Circular(prior.into()),
            FilterKind::Ukf1d => Estimator::Ukf1d(Ukf1d::new(prior.mu(), prior.sigma().powi(2))?),
            FilterKind::Ukf2d => Estimator::Ukf2d(Ukf2d::from_angle(prior.mu(), prior.sigma())?),
            FilterKind::Pf10 | FilterKind::Pf100 => {
                let mut rng = run_rng(self.config.seed, run, kind.stream());
                let n = kind.particles().expect("particle filter kind");
                Estimator::Particles(ParticleSet::sample(&prior, n, &mut rng)?, rng)
            }
        })
    }

    fn predict(&self, est: &mut Estimator) -> Result<()> {
        let a = self.config.transition();
        let additive = self.config.system == SystemKind::Additive;
        let noise_var = self.config.system_noise_sigma.powi(2);
        match est {
            Estimator::Circular(state) => {
                *state = if additive {
                    predict_nonlinear_additive(
                        state,
                        &self.config.additive_part(),
                        &CircularDistribution::from(self.noise),
                        &self.sampler,
                    )?
                } else {
                    predict_arbitrary(state, &a, &self.noise_samples, &self.sampler)?
                };
            }
            Estimator::Ukf1d(f) => f.predict(self.config.additive_part(), noise_var)?,
            Estimator::Ukf2d(f) => f.predict(self.config.additive_part(), noise_var)?,
            Estimator::Particles(p, rng) => p.predict(a, &self.noise, rng),
        }
        Ok(())
    }

    fn update(&self, est: &mut Estimator, z: &[f64; 2]) -> Result<StepOutcome> {
        let eta = self.config.eta;
        let mut out = StepOutcome {
            degenerate: false,
            trace: None,
        };
        match est {
            Estimator::Circular(state) => {
                let lik = make_additive_likelihood(unit_circle, self.meas_noise);
                let (next, trace) =
                    update_progressive(state, z, &lik, self.config.progression_threshold, &self.sampler)?;
                *state = next;
                out.trace = Some(trace);
            }
            Estimator::Ukf1d(f) => f.update::<2>(
                &Vector2::new(z[0], z[1]),
                |x| Vector2::from(unit_circle(x)),
                &(Matrix2::identity() * eta),
                &[false, false],
            )?,
            Estimator::Ukf2d(f) => f.update(&Vector2::new(z[0], z[1]), &(Matrix2::identity() * eta))?,
            Estimator::Particles(p, rng) => {
                let lik = make_additive_likelihood(unit_circle, self.meas_noise);
                out.degenerate = p.update(&lik, z, rng)?.degenerate;
            }
        }
        Ok(out)
    }

    fn estimate(est: &Estimator) -> f64 {
        match est {
            Estimator::Circular(s) => s.mean(),
            Estimator::Ukf1d(f) => f.mean,
            Estimator::Ukf2d(f) => f.angle(),
            Estimator::Particles(p, _) => p.mean(),
        }
    }

    /// Predict, measure, update, record, for `k = 1 .. k_max`.
    fn run_filter(&self, kind: FilterKind, run: usize, truth: &Trajectory) -> RunResult {
        let start = Instant::now();
        let mut result = RunResult {
            filter: kind,
            run,
            errors: Vec::with_capacity(self.config.k_max),
            rmse: PI,
            degenerate_steps: 0,
            failure: None,
            progression: (kind == FilterKind::Circular).then(ProgressionStats::default),
            wall_time: Duration::ZERO,
        };
        let outcome = (|| -> Result<()> {
            let mut est = self.init(kind, run)?;
            for (x, z) in truth.states.iter().zip(&truth.measurements) {
                self.predict(&mut est)?;
                let step = self.update(&mut est, z)?;
                result.degenerate_steps += usize::from(step.degenerate);
                if let (Some(trace), Some(stats)) = (step.trace, result.progression.as_mut()) {
                    stats.record(&trace, self.config.progression_threshold);
                }
                result.errors.push(angular_distance(Self::estimate(&est), *x));
            }
            Ok(())
        })();
        match outcome {
            Ok(()) => {
                let ss: f64 = result.errors.iter().map(|e| e * e).sum();
                result.rmse = (ss / result.errors.len() as f64).sqrt();
            }
            Err(e) => {
                if let (Error::ProgressionStall(_), Some(stats)) = (&e, result.progression.as_mut()) {
                    stats.updates += 1;
                    stats.stalls += 1;
                    stats.violations += 1;
                }
                result.failure = Some(e);
            }
        }
        result.wall_time = start.elapsed();
        result
    }
}

/// All runs of one scenario for the requested filters. Filters the
/// scenario does not support are skipped. Rows are ordered by run, then
/// by the order in `filters`.
pub fn run_filtering_experiment(config: &ScenarioConfig, filters: &[FilterKind]) -> Result<Vec<RunResult>> {
    use rayon::prelude::*;
    let runner = Runner::new(config)?;
    let filters: Vec<FilterKind> = filters.iter().copied().filter(|&k| config.supports(k)).collect();
    let per_run: Vec<Result<Vec<RunResult>>> = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let truth = simulate(config, run)?;
            Ok(filters
                .iter()
                .map(|&k| runner.run_filter(k, run, &truth))
                .collect())
        })
        .collect();
    let mut out = Vec::with_capacity(config.runs * filters.len());
    for rows in per_run {
        out.extend(rows?);
    }
    Ok(out)
}

/// Aggregate of one filter over all runs of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterSummary {
    pub scenario: String,
    pub filter: FilterKind,
    pub runs: usize,
    pub median_rmse: f64,
    pub mean_rmse: f64,
    pub failed_runs: usize,
    pub progression_stalls: usize,
    /// Runs with at least one degenerate particle update.
    pub degenerate_runs: usize,
    pub progression_violations: usize,
}

/// Per-filter summaries in first-appearance order.
pub fn summarize(scenario: &str, results: &[RunResult]) -> Vec<FilterSummary> {
    let mut kinds: Vec<FilterKind> = Vec::new();
    for r in results {
        if !kinds.contains(&r.filter) {
            kinds.push(r.filter);
        }
    }
    kinds
        .into_iter()
        .map(|k| {
            let rows: Vec<&RunResult> = results.iter().filter(|r| r.filter == k).collect();
            let rmse: Vec<f64> = rows.iter().map(|r| r.rmse).collect();
            FilterSummary {
                scenario: scenario.into(),
                filter: k,
                runs: rows.len(),
                median_rmse: median(&rmse),
                mean_rmse: rmse.iter().sum::<f64>() / rmse.len() as f64,
                failed_runs: rows.iter().filter(|r| r.failure.is_some()).count(),
                progression_stalls: rows.iter().filter_map(|r| r.progression.map(|p| p.stalls)).sum(),
                degenerate_runs: rows.iter().filter(|r| r.degenerate_steps > 0).count(),
                progression_violations: rows
                    .iter()
                    .filter_map(|r| r.progression.map(|p| p.violations))
                    .sum(),
            }
        })
        .collect()
}

/// CSV record of a [`RunResult`]. Wall time is left out so output bytes
/// depend only on the configuration and seed.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord<'a> {
    pub scenario: &'a str,
    pub run: usize,
    pub filter: FilterKind,
    pub rmse: f64,
    pub degenerate_steps: usize,
    pub failed: bool,
    pub progression_updates: usize,
    pub progression_steps: usize,
    pub progression_max_sum_error: f64,
    pub progression_min_ratio: f64,
    pub progression_stalls: usize,
    pub progression_violations: usize,
}

impl<'a> RunRecord<'a> {
    pub fn new(scenario: &'a str, r: &RunResult) -> Self {
        let p = r.progression.unwrap_or_default();
        let has = r.progression.is_some();
        RunRecord {
            scenario,
            run: r.run,
            filter: r.filter,
            rmse: r.rmse,
            degenerate_steps: r.degenerate_steps,
            failed: r.failure.is_some(),
            progression_updates: p.updates,
            progression_steps: p.steps,
            progression_max_sum_error: if has { p.max_sum_error } else { f64::NAN },
            progression_min_ratio: if has { p.min_ratio } else { f64::NAN },
            progression_stalls: p.stalls,
            progression_violations: p.violations,
        }
    }
}
