//! Derivative-free minimization over rotation angles.
//!
//! The strategy is a `(μ/μ_I, λ)` evolution strategy with log-normal self-adaptation of
//! one global step size:
//!
//! ```text
//! σ_l = σ̄ · exp(τ z_l),      τ = 1/√(2 D)
//! θ_l = θ̄ + σ_l · N(0, I)
//! ```
//!
//! The `μ` best offspring are averaged into the next `θ̄` and `σ̄` (comma selection).
//! The best point ever evaluated is kept separately and returned, so the reported
//! fitness never increases. Angles are wrapped to `[-π, π)` before evaluation; the
//! search mean is kept unwrapped within a generation so recombination never averages
//! across the branch cut.
//!
//! All random draws for a generation happen before its (parallel) evaluation, and the
//! results are collected in candidate order, so the output for a given seed does not
//! depend on the thread count.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::wrap_angle;

/// A scalar function of an angle vector, optionally exposing per-component values
/// (e.g. normalized nullifier variances) for the trace.
pub trait Objective: Sync {
    fn fitness(&self, theta: &[f64]) -> f64;

    fn components(&self, _theta: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn fitness(&self, theta: &[f64]) -> f64 {
        self(theta)
    }
}

fn default_population() -> usize {
    16
}
fn default_parents() -> usize {
    4
}
fn default_sigma0() -> f64 {
    0.3
}
fn default_max_generations() -> usize {
    500
}
fn default_starts() -> usize {
    8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Offspring per generation (λ).
    #[serde(default = "default_population")]
    pub population: usize,
    /// Offspring recombined into the next mean (μ).
    #[serde(default = "default_parents")]
    pub parents: usize,
    /// Initial step size in radians.
    #[serde(default = "default_sigma0")]
    pub sigma0: f64,
    #[serde(default = "default_max_generations")]
    pub max_generations: usize,
    /// Stop as soon as the best fitness is at or below this value.
    #[serde(default)]
    pub target: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Independent restarts used by [`multi_start`].
    #[serde(default = "default_starts")]
    pub starts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            population: default_population(),
            parents: default_parents(),
            sigma0: default_sigma0(),
            max_generations: default_max_generations(),
            target: None,
            seed: 0,
            starts: default_starts(),
        }
    }
}

/// Step sizes below this end the run.
pub const MIN_SIGMA: f64 = 1e-8;

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.parents == 0 || self.parents > self.population {
            return Err(Error::Validation(format!(
                "optimizer.parents must be in 1..=population ({}), got {}",
                self.population, self.parents
            )));
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return Err(Error::Validation(format!(
                "optimizer.sigma0 must be positive, got {}",
                self.sigma0
            )));
        }
        if self.max_generations == 0 {
            return Err(Error::Validation(
                "optimizer.max_generations must be positive".into(),
            ));
        }
        if self.starts == 0 {
            return Err(Error::Validation(
                "optimizer.starts must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Best fitness seen so far.
    pub best_fitness: f64,
    /// Mean over this generation's offspring (the start value for generation 0).
    pub mean_fitness: f64,
    pub sigma: f64,
    /// Components of this generation's best offspring (the start point for generation 0),
    /// when the objective provides them.
    pub components: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub records: Vec<GenerationRecord>,
}

impl OptimizationTrace {
    /// CSV with columns `generation,best_fitness,mean_fitness,sigma` followed by
    /// `nullifier_1..nullifier_K` when components are present.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let width = self
            .records
            .iter()
            .filter_map(|r| r.components.as_ref().map(Vec::len))
            .max()
            .unwrap_or(0);
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = ["generation", "best_fitness", "mean_fitness", "sigma"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        header.extend((1..=width).map(|i| format!("nullifier_{i}")));
        let io = |e: csv::Error| Error::Validation(format!("trace write failed: {e}"));
        out.write_record(&header).map_err(io)?;
        for r in &self.records {
            let mut row = vec![
                r.generation.to_string(),
                r.best_fitness.to_string(),
                r.mean_fitness.to_string(),
                r.sigma.to_string(),
            ];
            let comps = r.components.clone().unwrap_or_default();
            row.extend((0..width).map(|i| comps.get(i).map(f64::to_string).unwrap_or_default()));
            out.write_record(&row).map_err(io)?;
        }
        out.flush()
            .map_err(|e| Error::Validation(format!("trace write failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn best_fitness(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.best_fitness)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    MaxGenerations,
    TargetReached,
    StepSize,
    EmptyDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub theta: Vec<f64>,
    pub fitness: f64,
    pub stop: StopReason,
    pub trace: OptimizationTrace,
}

fn sanitize(f: f64) -> f64 {
    if f.is_nan() {
        f64::INFINITY
    } else {
        f
    }
}

fn wrapped(theta: &[f64]) -> Vec<f64> {
    theta.iter().copied().map(wrap_angle).collect()
}

/// Runs the strategy starting from `θ = 0`.
pub fn optimize<O: Objective + ?Sized>(
    objective: &O,
    dim: usize,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    optimize_from(objective, &vec![0.0; dim], config)
}

pub fn optimize_from<O: Objective + ?Sized>(
    objective: &O,
    start: &[f64],
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    let dim = start.len();
    let mut mean = wrapped(start);
    let start_fitness = sanitize(objective.fitness(&mean));
    let mut best = (mean.clone(), start_fitness);
    let mut trace = OptimizationTrace::default();
    trace.records.push(GenerationRecord {
        generation: 0,
        best_fitness: start_fitness,
        mean_fitness: start_fitness,
        sigma: config.sigma0,
        components: objective.components(&mean),
    });
    if dim == 0 {
        return Ok(OptimizationResult {
            theta: Vec::new(),
            fitness: start_fitness,
            stop: StopReason::EmptyDomain,
            trace,
        });
    }

    let reached = |f: f64| config.target.is_some_and(|t| f <= t);
    if reached(start_fitness) {
        return Ok(OptimizationResult {
            theta: best.0,
            fitness: best.1,
            stop: StopReason::TargetReached,
            trace,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tau = 1.0 / (2.0 * dim as f64).sqrt();
    let mut sigma = config.sigma0;
    let mut stop = StopReason::MaxGenerations;

    for generation in 1..=config.max_generations {
        let offspring: Vec<(Vec<f64>, f64)> = (0..config.population)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                let s = sigma * (tau * z).exp();
                let x: Vec<f64> = mean
                    .iter()
                    .map(|m| m + s * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                (x, s)
            })
            .collect();
        let scores: Vec<f64> = offspring
            .par_iter()
            .map(|(x, _)| sanitize(objective.fitness(&wrapped(x))))
            .collect();

        let mut order: Vec<usize> = (0..offspring.len()).collect();
        order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

        let top = order[0];
        if scores[top] < best.1 {
            best = (wrapped(&offspring[top].0), scores[top]);
        }

        let mu = config.parents as f64;
        mean = (0..dim)
            .map(|d| {
                order[..config.parents]
                    .iter()
                    .map(|&i| offspring[i].0[d])
                    .sum::<f64>()
                    / mu
            })
            .map(wrap_angle)
            .collect();
        sigma = order[..config.parents]
            .iter()
            .map(|&i| offspring[i].1)
            .sum::<f64>()
            / mu;

        let finite: Vec<f64> = scores.iter().copied().filter(|s| s.is_finite()).collect();
        let mean_fitness = if finite.is_empty() {
            f64::INFINITY
        } else {
            finite.iter().sum::<f64>() / finite.len() as f64
        };
        trace.records.push(GenerationRecord {
            generation,
            best_fitness: best.1,
            mean_fitness,
            sigma,
            components: objective.components(&wrapped(&offspring[top].0)),
        });

        if reached(best.1) {
            stop = StopReason::TargetReached;
            break;
        }
        if sigma < MIN_SIGMA {
            stop = StopReason::StepSize;
            break;
        }
    }

    Ok(OptimizationResult {
        theta: best.0,
        fitness: best.1,
        stop,
        trace,
    })
}

/// Outcome of every restart plus the index of the winner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiStartResult {
    pub best_start: usize,
    pub runs: Vec<OptimizationResult>,
}

impl MultiStartResult {
    pub fn best(&self) -> &OptimizationResult {
        &self.runs[self.best_start]
    }
}

/// Seed of restart `index`, derived from the top-level seed.
pub fn start_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// `config.starts` independent runs. Run 0 starts at `θ = 0`; the others start at
/// uniformly drawn angles. Ties go to the earliest run.
pub fn multi_start<O: Objective + ?Sized>(
    objective: &O,
    dim: usize,
    config: &OptimizerConfig,
) -> Result<MultiStartResult> {
    multi_start_from(objective, &vec![0.0; dim], config)
}

/// Like [`multi_start`], with run 0 starting at `first`.
pub fn multi_start_from<O: Objective + ?Sized>(
    objective: &O,
    first: &[f64],
    config: &OptimizerConfig,
) -> Result<MultiStartResult> {
    config.validate()?;
    let dim = first.len();
    let mut runs = Vec::with_capacity(config.starts);
    for index in 0..config.starts {
        let seed = start_seed(config.seed, index);
        let start: Vec<f64> = if index == 0 {
            first.to_vec()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005E_ED0F_5747);
            (0..dim).map(|_| rng.random_range(-PI..PI)).collect()
        };
        let cfg = OptimizerConfig {
            seed,
            ..config.clone()
        };
        runs.push(optimize_from(objective, &start, &cfg)?);
    }
    let best_start = runs
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.fitness.total_cmp(&b.fitness).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("at least one start");
    Ok(MultiStartResult { best_start, runs })
}

/// Largest dimension [`exhaustive_baseline`] accepts.
pub const MAX_GRID_DIM: usize = 3;

/// Grid search over `[-π, π)^dim` with spacing at most `resolution`.
///
/// Returns the first grid point (in row-major order) attaining the minimum.
pub fn exhaustive_baseline<O: Objective + ?Sized>(
    objective: &O,
    dim: usize,
    resolution: f64,
) -> Result<(Vec<f64>, f64)> {
    if dim > MAX_GRID_DIM {
        return Err(Error::Refused(format!(
            "grid search limited to {MAX_GRID_DIM} dimensions, got {dim}"
        )));
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::Validation(format!(
            "grid resolution must be positive, got {resolution}"
        )));
    }
    if dim == 0 {
        return Ok((Vec::new(), sanitize(objective.fitness(&[]))));
    }
    let per_axis = (2.0 * PI / resolution).ceil() as usize;
    let step = 2.0 * PI / per_axis as f64;
    let total = per_axis.pow(dim as u32);
    let point = |mut idx: usize| -> Vec<f64> {
        let mut p = vec![0.0; dim];
        for d in (0..dim).rev() {
            p[d] = -PI + step * (idx % per_axis) as f64;
            idx /= per_axis;
        }
        p
    };
    let (f, idx) = (0..total)
        .into_par_iter()
        .map(|i| (sanitize(objective.fitness(&point(i))), i))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| match a.0.total_cmp(&b.0) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => {
                    if a.1 <= b.1 {
                        a
                    } else {
                        b
                    }
                }
            },
        );
    Ok((point(idx), f))
}
