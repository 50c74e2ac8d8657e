//! Linear-optics networks for continuous-variable cluster states, with finite-squeezing
//! noise analysis and optimization of the network's free rotation angles.
//!
//! A cluster state with graph `V` is produced from independently squeezed modes by any
//! unitary
//!
//! ```text
//! U_V(θ) = (I + iV) (V² + I)^{-1/2} O(θ)
//! ```
//!
//! where `O(θ)` is a real orthogonal matrix. At infinite squeezing every choice of `θ`
//! yields the same state, but with unequal finite squeezing the angles decide how noise is
//! spread across the nullifiers and, in measurement-based computation, how much excess
//! noise reaches the output mode. The crate builds `U_V(θ)`, evaluates those noise figures
//! and searches `θ` with an evolution strategy.
//!
//! ```
//! use cvnet::{AdjacencyGraph, AngleVector, SqueezingProfile, nullifier_report};
//!
//! let chain = AdjacencyGraph::linear_cluster(4)?;
//! let prof = SqueezingProfile::new(vec![-7.0, -6.0, -4.0, 0.0])?;
//! let report = nullifier_report(&chain, &AngleVector::zeros(6), &prof)?;
//! assert_eq!(report.shot, vec![2.0, 3.0, 3.0, 2.0]);
//! # Ok::<(), cvnet::Error>(())
//! ```
//!
//! Modules:
//! - [`linalg`]: SPD inverse square root, Givens parameterization of `SO(N)`, quadrature
//!   (symplectic) representation.
//! - [`graph`]: adjacency matrices.
//! - [`network`]: synthesis of `U_V(θ)` and the cluster condition `Y = V X`.
//! - [`noise`]: squeezing profiles, nullifier variances, covariance propagation.
//! - [`mbqc`]: composition with a measurement plan, measurement elimination, excess noise.
//! - [`es`]: evolution strategy, restarts, grid-search baseline, CSV traces.
//! - [`cli`]: JSON-in/JSON-out batch runner behind the `cvnet` binary.

pub mod cli;
pub mod error;
pub mod es;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod mbqc;
pub mod network;
pub mod noise;

pub use error::{Error, Result};
pub use es::{
    exhaustive_baseline, multi_start, optimize, Objective, OptimizationResult, OptimizationTrace,
    OptimizerConfig,
};
pub use graph::{AdjacencyGraph, GraphSpec};
pub use linalg::{
    check_symplectic, givens_orthogonal, inv_sqrt_spd, quadrature_symplectic, AngleVector,
    Complex64, ComplexMatrix, RealMatrix, Tolerances,
};
pub use mbqc::{
    beamsplitter_unitary, compose_computation, eliminate_and_project, extra_noise_variances,
    fitness_f2, nullifier_decomposition, ExcessNoise, MbqcObjective, MbqcOutcome, MeasurementPlan,
};
pub use network::{
    cluster_unitary, symmetric_unitary, verify_cluster_condition, ClusterNetwork, NetworkUnitary,
};
pub use noise::{
    covariance_propagate, fitness_f1, fitness_f1_alt, nullifier_report, nullifier_variances,
    shot_noise_variances, squeezing_to_k, ClusterObjective, NullifierFitness, NullifierReport,
    SqueezingProfile,
};
