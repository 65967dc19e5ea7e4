//! Seeded multi-run experiments and their quartile summaries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::noise::GaussianNoise;
use crate::optim::{
    noise_oblivious_run, run_optimizer, ObliviousKind, OptimizerKind, OptimizerOutcome, Problem,
    Sizing,
};
use crate::rng::{mix_seed, RandomStream};
use crate::stats::percentile_sorted;

/// Which optimizer to run. `None` sizes come from [`Sizing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Cga { k: Option<u64> },
    Ea { mu: usize },
    Rerls { m: Option<u64> },
    NoCga,
    NoRerls,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Cga { .. } => "cga",
            Algorithm::Ea { .. } => "ea",
            Algorithm::Rerls { .. } => "rerls",
            Algorithm::NoCga => "no-cga",
            Algorithm::NoRerls => "no-rerls",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub n: usize,
    pub sigma2: f64,
    pub runs: usize,
    pub budget: u64,
    pub master_seed: u64,
    pub sizing: Sizing,
    /// Clamp cGA frequencies to `[1/n, 1 - 1/n]`.
    pub margin: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, n: usize, sigma2: f64) -> Self {
        Self {
            algorithm,
            n,
            sigma2,
            runs: 100,
            budget: 100_000_000,
            master_seed: 0,
            sizing: Sizing::default(),
            margin: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(invalid("runs must be >= 1"));
        }
        if self.budget == 0 {
            return Err(invalid("budget must be >= 1"));
        }
        if self.n == 0 {
            return Err(crate::error::Error::InvalidSize(0));
        }
        GaussianNoise::new(self.sigma2)?;
        self.resolve()?;
        Ok(())
    }

    /// The concrete optimizer a known-variance run uses, or `None` for the
    /// noise-oblivious variants.
    pub fn resolve(&self) -> Result<Option<OptimizerKind>> {
        let kind = match self.algorithm {
            Algorithm::Cga { k } => OptimizerKind::Cga {
                k: match k {
                    Some(k) => k,
                    None => self.sizing.default_population_size(self.sigma2, self.n)?,
                },
                margin: self.margin,
            },
            Algorithm::Ea { mu } => OptimizerKind::Ea { mu },
            Algorithm::Rerls { m } => OptimizerKind::Rerls {
                m: match m {
                    Some(m) => m,
                    None => self.sizing.default_resamples(self.sigma2, self.n)?,
                },
            },
            Algorithm::NoCga | Algorithm::NoRerls => {
                if self.n < 2 {
                    return Err(invalid("noise-oblivious variants need n >= 2"));
                }
                return Ok(None);
            }
        };
        kind.validate(self.n)?;
        Ok(Some(kind))
    }
}

/// One run's result. `param` is K, μ or m for known-variance runs and the
/// final variance guess for noise-oblivious runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub hit: bool,
    pub evals_at_hit: Option<u64>,
    pub evals_total: u64,
    pub param: f64,
    #[serde(skip)]
    pub min_frequency_seen: Option<f64>,
}

fn single_run(
    config: &ExperimentConfig,
    kind: Option<OptimizerKind>,
    run: usize,
) -> Result<RunRecord> {
    let seed = mix_seed(config.master_seed, run as u64);
    let noise = GaussianNoise::new(config.sigma2)?;
    let mut problem = Problem::new(config.n, noise, config.budget, RandomStream::new(seed))?;
    let outcome: OptimizerOutcome = match kind {
        Some(kind) => run_optimizer(kind, &mut problem)?,
        None => {
            let oblivious = match config.algorithm {
                Algorithm::NoCga => ObliviousKind::Cga {
                    margin: config.margin,
                },
                _ => ObliviousKind::Rerls,
            };
            let sizing = config.sizing;
            let n = config.n;
            let budget = move |v: f64| oblivious.default_phase_budget(v, n, &sizing);
            noise_oblivious_run(oblivious, &mut problem, &config.sizing, &budget)?
        }
    };
    let param = outcome
        .params_used
        .variance_guess
        .unwrap_or_else(|| outcome.params_used.param.value());
    Ok(RunRecord {
        run,
        seed,
        hit: outcome.hit,
        evals_at_hit: outcome.evals_at_hit,
        evals_total: outcome.evals_total,
        param,
        min_frequency_seen: outcome.min_frequency_seen,
    })
}

/// Runs `config.runs` independent seeded runs. Records come back ordered by
/// run index and do not depend on how the runs were scheduled.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let kind = config.resolve()?;
    let mut records = (0..config.runs)
        .into_par_iter()
        .map(|run| single_run(config, kind, run))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.run);
    Ok(records)
}

/// One point of a runtime plot: quartiles of the evaluations-to-hit over the
/// runs that hit. Quartiles are `None` when no run hit.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub x: f64,
    pub quartiles: Option<Quartiles>,
    pub hits: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartiles {
    pub lq: f64,
    pub med: f64,
    pub uq: f64,
}

impl Quartiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Some(Self {
            lq: percentile_sorted(&sorted, 0.25),
            med: percentile_sorted(&sorted, 0.5),
            uq: percentile_sorted(&sorted, 0.75),
        })
    }
}

/// Quartiles of `evals_at_hit` over hitting runs; misses only count toward
/// `runs`.
pub fn summarize(records: &[RunRecord], x: f64) -> Result<SummaryRow> {
    if records.is_empty() {
        return Err(invalid("cannot summarize zero records"));
    }
    let hits: Vec<f64> = records
        .iter()
        .filter_map(|r| r.evals_at_hit.map(|e| e as f64))
        .collect();
    Ok(SummaryRow {
        x,
        quartiles: Quartiles::of(&hits),
        hits: hits.len(),
        runs: records.len(),
    })
}

/// Quartiles of the parameter the hitting runs used (K, m or final variance guess).
pub fn summarize_params(records: &[RunRecord], x: f64) -> Result<SummaryRow> {
    if records.is_empty() {
        return Err(invalid("cannot summarize zero records"));
    }
    let params: Vec<f64> = records.iter().filter(|r| r.hit).map(|r| r.param).collect();
    Ok(SummaryRow {
        x,
        quartiles: Quartiles::of(&params),
        hits: params.len(),
        runs: records.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Vary σ² at fixed n.
    Variance,
    /// Vary n with σ² = √n.
    Dimension,
}

/// Settings actually used at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMeta {
    pub x: f64,
    pub n: usize,
    pub sigma2: f64,
    pub budget: u64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub algorithm: &'static str,
    pub rows: Vec<SummaryRow>,
    /// Quartiles of K / m / final variance guess per point.
    pub param_rows: Vec<SummaryRow>,
    pub points: Vec<PointMeta>,
}

/// Runs `template` at every grid value. A failing point yields a row with
/// no quartiles and its error in `points`; the sweep itself carries on.
pub fn sweep(axis: SweepAxis, grid: &[f64], template: &ExperimentConfig) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(invalid("sweep grid is empty"));
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut param_rows = Vec::with_capacity(grid.len());
    let mut points = Vec::with_capacity(grid.len());
    for &x in grid {
        let mut config = template.clone();
        let point = match axis {
            SweepAxis::Variance => {
                config.sigma2 = x;
                Ok(())
            }
            SweepAxis::Dimension => {
                if x >= 1.0 && x.fract() == 0.0 {
                    config.n = x as usize;
                    config.sigma2 = x.sqrt();
                    Ok(())
                } else {
                    Err(invalid(format!(
                        "dimension grid value {x} is not a positive integer"
                    )))
                }
            }
        };
        let records = point.and_then(|_| run_experiment(&config));
        let (row, param_row, error) =
            match records.and_then(|r| Ok((summarize(&r, x)?, summarize_params(&r, x)?))) {
                Ok((row, param_row)) => (row, param_row, None),
                Err(e) => {
                    let empty = SummaryRow {
                        x,
                        quartiles: None,
                        hits: 0,
                        runs: 0,
                    };
                    (empty.clone(), empty, Some(e.to_string()))
                }
            };
        rows.push(row);
        param_rows.push(param_row);
        points.push(PointMeta {
            x,
            n: config.n,
            sigma2: config.sigma2,
            budget: config.budget,
            error,
        });
    }
    Ok(SweepResult {
        axis,
        algorithm: template.algorithm.name(),
        rows,
        param_rows,
        points,
    })
}
