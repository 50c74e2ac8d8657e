//! Batch front end: one JSON problem in, one JSON report (and optionally a CSV trace) out.
//!
//! Exit codes: `0` success, `1` I/O failure, `2` malformed JSON, `3` invalid problem.

use std::fmt;
use std::path::PathBuf;

use clap::Parser;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::es::{multi_start_from, OptimizationTrace, OptimizerConfig, StopReason};
use crate::graph::{AdjacencyGraph, GraphSpec};
use crate::linalg::AngleVector;
use crate::mbqc::{ExcessNoise, MbqcObjective, MbqcOutcome, MeasurementPlan};
use crate::network::{ClusterNetwork, UnitaryExport};
use crate::noise::{ClusterObjective, NullifierFitness, NullifierReport, SqueezingProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Synthesize,
    Nullifiers,
    OptimizeCluster,
    Mbqc,
    OptimizeMbqc,
}

impl Task {
    fn is_optimization(self) -> bool {
        matches!(self, Task::OptimizeCluster | Task::OptimizeMbqc)
    }

    fn needs_plan(self) -> bool {
        matches!(self, Task::Mbqc | Task::OptimizeMbqc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanPreset {
    Fourier,
}

/// Either a named preset (`"fourier"`) or a full plan object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlanSpec {
    Preset(PlanPreset),
    Custom(MeasurementPlan),
}

impl PlanSpec {
    pub fn resolve(&self) -> MeasurementPlan {
        match self {
            PlanSpec::Preset(PlanPreset::Fourier) => MeasurementPlan::fourier(),
            PlanSpec::Custom(p) => p.clone(),
        }
    }
}

/// Problem description read from `--spec`.
///
/// `squeezing_db` defaults to vacuum on every cluster mode, `theta` to all zeros. For
/// optimization tasks `theta` is the start point of the first restart. The top-level
/// `seed` is the only source of randomness and overrides `optimizer.seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub task: Task,
    pub graph: GraphSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub squeezing_db: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitness: Option<NullifierFitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationSummary {
    pub fitness: f64,
    pub stop: StopReason,
    pub generations: usize,
    pub best_start: usize,
    pub start_fitness: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub task: Task,
    /// The problem with every default filled in; re-running it reproduces this report.
    pub resolved: ProblemSpec,
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<UnitaryExport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nullifiers: Option<NullifierReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mbqc: Option<MbqcOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excess_noise: Option<ExcessNoise>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimization: Option<OptimizationSummary>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub trace: Option<OptimizationTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Io(String),
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Invalid {
        field: String,
        message: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse { .. } => 2,
            CliError::Invalid { .. } => 3,
        }
    }

    fn invalid(field: &str, message: impl ToString) -> Self {
        CliError::Invalid {
            field: field.to_string(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Parse {
                line,
                column,
                message,
            } => write!(
                f,
                "malformed JSON at line {line}, column {column}: {message}"
            ),
            CliError::Invalid { field, message } => write!(f, "invalid field `{field}`: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

fn at(field: &'static str) -> impl Fn(Error) -> CliError {
    move |e| CliError::invalid(field, e)
}

/// Parses a problem; syntax errors carry line/column, schema errors name the field path.
pub fn parse_spec(json: &str) -> Result<ProblemSpec, CliError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => CliError::invalid(&path, inner),
            _ => CliError::Parse {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            },
        }
    })
}

fn resolve_theta(spec: &ProblemSpec, dim: usize) -> Result<AngleVector, CliError> {
    match &spec.theta {
        None => Ok(AngleVector::zeros(dim)),
        Some(t) if t.len() != dim => Err(CliError::invalid(
            "theta",
            format!("expected {dim} angles, got {}", t.len()),
        )),
        Some(t) if t.iter().any(|v| !v.is_finite()) => {
            Err(CliError::invalid("theta", "angles must be finite"))
        }
        Some(t) => Ok(AngleVector::new(t.clone())),
    }
}

/// Executes one problem. `seed` (e.g. from `--seed`) overrides the spec's seed.
pub fn run(spec: &ProblemSpec, seed: Option<u64>) -> Result<RunOutput, CliError> {
    let graph = AdjacencyGraph::from_spec(&spec.graph).map_err(at("graph"))?;
    let n = graph.n();
    let net = ClusterNetwork::new(&graph).map_err(at("graph"))?;
    let dim = net.angle_dim();
    let theta = resolve_theta(spec, dim)?;

    let prof = match &spec.squeezing_db {
        None => SqueezingProfile::vacuum(n),
        Some(db) => {
            if db.len() != n {
                return Err(CliError::invalid(
                    "squeezing_db",
                    format!(
                        "expected {n} entries (one per cluster mode), got {}",
                        db.len()
                    ),
                ));
            }
            SqueezingProfile::new(db.clone()).map_err(at("squeezing_db"))?
        }
    };

    let plan = if spec.task.needs_plan() {
        let plan = spec
            .plan
            .as_ref()
            .ok_or_else(|| CliError::invalid("plan", format!("required for task {:?}", spec.task)))?
            .resolve();
        plan.validate(n).map_err(at("plan"))?;
        Some(plan)
    } else {
        None
    };

    let mut resolved = spec.clone();
    resolved.squeezing_db = Some(prof.db().to_vec());
    resolved.theta = Some(theta.as_slice().to_vec());
    resolved.plan = plan.clone().map(PlanSpec::Custom);
    if spec.task == Task::OptimizeCluster {
        resolved.fitness = Some(spec.fitness.unwrap_or_default());
    }

    let mut optimizer = None;
    if spec.task.is_optimization() {
        let seed = seed.or(spec.seed).unwrap_or_else(rand::random);
        let cfg = spec.optimizer.clone().unwrap_or_default().with_seed(seed);
        cfg.validate().map_err(at("optimizer"))?;
        resolved.seed = Some(seed);
        resolved.optimizer = Some(cfg.clone());
        optimizer = Some(cfg);
    }

    let mut report = Report {
        task: spec.task,
        resolved,
        theta: theta.as_slice().to_vec(),
        unitary: None,
        nullifiers: None,
        mbqc: None,
        excess_noise: None,
        optimization: None,
    };
    let mut trace = None;

    match spec.task {
        Task::Synthesize => {
            let u = net.unitary(&theta).map_err(at("theta"))?;
            report.unitary = Some(u.export(&graph));
        }
        Task::Nullifiers => {
            let obj = ClusterObjective::new(&graph, &prof, NullifierFitness::Normalized)
                .map_err(at("squeezing_db"))?;
            report.nullifiers = Some(obj.report(theta.as_slice()));
        }
        Task::Mbqc => {
            let obj =
                MbqcObjective::new(&graph, plan.as_ref().unwrap(), &prof).map_err(at("plan"))?;
            let (outcome, noise) = obj.evaluate(theta.as_slice()).map_err(at("plan"))?;
            report.mbqc = Some(outcome);
            report.excess_noise = Some(noise);
        }
        Task::OptimizeCluster => {
            let kind = spec.fitness.unwrap_or_default();
            let obj = ClusterObjective::new(&graph, &prof, kind).map_err(at("squeezing_db"))?;
            let cfg = optimizer.as_ref().unwrap();
            let (best, summary) = optimize_task(&obj, theta.as_slice(), cfg)?;
            report.theta = best.theta.clone();
            report.nullifiers = Some(obj.report(&best.theta));
            report.unitary = Some(
                net.unitary(&AngleVector::new(best.theta.clone()))
                    .map_err(at("theta"))?
                    .export(&graph),
            );
            report.optimization = Some(summary);
            trace = Some(best.trace);
        }
        Task::OptimizeMbqc => {
            let obj =
                MbqcObjective::new(&graph, plan.as_ref().unwrap(), &prof).map_err(at("plan"))?;
            let cfg = optimizer.as_ref().unwrap();
            let (best, summary) = optimize_task(&obj, theta.as_slice(), cfg)?;
            let (outcome, noise) = obj.evaluate(&best.theta).map_err(at("plan"))?;
            report.theta = best.theta.clone();
            report.mbqc = Some(outcome);
            report.excess_noise = Some(noise);
            report.optimization = Some(summary);
            trace = Some(best.trace);
        }
    }
    Ok(RunOutput { report, trace })
}

fn optimize_task<O: crate::es::Objective>(
    obj: &O,
    start: &[f64],
    cfg: &OptimizerConfig,
) -> Result<(crate::es::OptimizationResult, OptimizationSummary), CliError> {
    let ms = multi_start_from(obj, start, cfg).map_err(at("optimizer"))?;
    let best = ms.best().clone();
    let summary = OptimizationSummary {
        fitness: best.fitness,
        stop: best.stop,
        generations: best.trace.records.len().saturating_sub(1),
        best_start: ms.best_start,
        start_fitness: ms.runs.iter().map(|r| r.fitness).collect(),
    };
    Ok((best, summary))
}

/// Command-line flags of the `cvnet` binary.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "cvnet",
    version,
    about = "Cluster-state network synthesis and noise optimization"
)]
pub struct CliArgs {
    /// Problem description (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-generation trace CSV (optimization tasks only).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Overrides the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub quiet: bool,
}

pub fn execute(args: &CliArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.spec.display())))?;
    let spec = parse_spec(&text)?;
    let out = run(&spec, args.seed)?;

    if !args.quiet {
        if let Some(seed) = out.report.resolved.seed {
            eprintln!("seed: {seed}");
        }
        if let Some(o) = &out.report.optimization {
            eprintln!(
                "best fitness {:.6} after {} generations (start {})",
                o.fitness, o.generations, o.best_start
            );
        }
    }

    let json = serde_json::to_string_pretty(&out.report).expect("report serializes");
    match &args.out {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{json}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(CliError::Io(format!("stdout: {e}")));
                }
            }
        }
    }
    if let Some(path) = &args.trace {
        match &out.trace {
            Some(trace) => {
                let file = std::fs::File::create(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                trace
                    .write_csv(file)
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
            None if !args.quiet => eprintln!("note: task produces no trace; --trace ignored"),
            None => {}
        }
    }
    Ok(())
}
