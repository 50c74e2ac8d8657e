//! Finite-squeezing noise on cluster nullifiers.
//!
//! Each input mode `j` is squeezed in `p` with variance `k_j` (vacuum = 1) and
//! anti-squeezed in `x` with variance `1/k_j`. When the network satisfies the cluster
//! condition the anti-squeezed terms cancel from every nullifier
//! `δ_i = p_i − Σ_l V_il x_l`, leaving
//!
//! ```text
//! Δ²δ_i = [(X_s + V Y_s) O K Oᵀ (X_s + V Y_s)ᵀ]_ii
//! ```
//!
//! [`covariance_propagate`] and [`nullifier_variances_from_covariance`] evaluate the same
//! quantity through the full `2N×2N` covariance matrix and serve as an independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::es::Objective;
use crate::graph::AdjacencyGraph;
use crate::linalg::{check_symplectic, AngleVector, RealMatrix};
use crate::network::{ClusterNetwork, NetworkUnitary};

/// Per-mode squeezed-quadrature variance in dB relative to shot noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SqueezingProfile {
    db: Vec<f64>,
}

impl SqueezingProfile {
    pub fn new(db: impl Into<Vec<f64>>) -> Result<Self> {
        let db = db.into();
        if let Some((i, v)) = db.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "squeezing_db[{i}] = {v} is not finite"
            )));
        }
        Ok(SqueezingProfile { db })
    }

    pub fn vacuum(n: usize) -> Self {
        SqueezingProfile { db: vec![0.0; n] }
    }

    pub fn uniform(n: usize, db: f64) -> Result<Self> {
        Self::new(vec![db; n])
    }

    pub fn len(&self) -> usize {
        self.db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.db.is_empty()
    }

    pub fn db(&self) -> &[f64] {
        &self.db
    }

    /// Squeezed variances `k_i = 10^(dB_i / 10)`.
    pub fn variances(&self) -> Vec<f64> {
        self.db.iter().map(|d| db_to_variance(*d)).collect()
    }

    pub fn k_matrix(&self) -> RealMatrix {
        squeezing_to_k(&self.db)
    }

    pub(crate) fn expect_len(&self, n: usize, context: &str) -> Result<()> {
        if self.len() != n {
            return Err(Error::dimension(context, n, self.len()));
        }
        Ok(())
    }
}

pub fn db_to_variance(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Diagonal `K` with `K_ii = 10^(dB_i / 10)`.
pub fn squeezing_to_k(db: &[f64]) -> RealMatrix {
    RealMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        db.len(),
        db.iter().map(|d| db_to_variance(*d)),
    ))
}

/// Nullifier variances, their vacuum baselines and the two mean figures of merit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullifierReport {
    pub variances: Vec<f64>,
    pub shot: Vec<f64>,
    pub normalized: Vec<f64>,
    pub f1: f64,
    pub f1_alt: f64,
}

impl NullifierReport {
    pub fn new(variances: Vec<f64>, shot: Vec<f64>) -> Self {
        let normalized: Vec<f64> = variances.iter().zip(&shot).map(|(v, s)| v / s).collect();
        let n = variances.len().max(1) as f64;
        let f1 = normalized.iter().sum::<f64>() / n;
        let f1_alt = variances.iter().zip(&shot).map(|(v, s)| v - s).sum::<f64>() / n;
        NullifierReport {
            variances,
            shot,
            normalized,
            f1,
            f1_alt,
        }
    }
}

/// `diag(M K Mᵀ)` for diagonal `K` given as a vector.
fn diag_congruence(m: &RealMatrix, k: &[f64]) -> Vec<f64> {
    m.row_iter()
        .map(|row| row.iter().zip(k).map(|(a, kj)| a * a * kj).sum())
        .collect()
}

/// Closed-form nullifier variances of `U(θ)` for the given graph.
pub fn nullifier_variances(
    g: &AdjacencyGraph,
    theta: &AngleVector,
    prof: &SqueezingProfile,
) -> Result<Vec<f64>> {
    nullifier_variances_for(&ClusterNetwork::new(g)?, theta, prof)
}

pub fn nullifier_variances_for(
    net: &ClusterNetwork,
    theta: &AngleVector,
    prof: &SqueezingProfile,
) -> Result<Vec<f64>> {
    prof.expect_len(net.n(), "squeezing profile")?;
    let o = net.orthogonal(theta)?;
    Ok(diag_congruence(
        &(net.nullifier_root() * o),
        &prof.variances(),
    ))
}

/// Nullifier variances of an arbitrary cluster unitary, `diag((X + VY) K (X + VY)ᵀ)`.
///
/// Assumes the cluster condition holds; otherwise the anti-squeezed contribution is
/// silently dropped.
pub fn nullifier_variances_of(
    u: &NetworkUnitary,
    g: &AdjacencyGraph,
    prof: &SqueezingProfile,
) -> Result<Vec<f64>> {
    prof.expect_len(g.n(), "squeezing profile")?;
    Ok(diag_congruence(
        &u.nullifier_coefficients(g)?,
        &prof.variances(),
    ))
}

/// Vacuum baseline `diag(V² + I)`.
pub fn shot_noise_variances(g: &AdjacencyGraph) -> Vec<f64> {
    g.v2_plus_identity().diagonal().iter().copied().collect()
}

/// Input covariance `diag(1/k_1, ..., 1/k_N, k_1, ..., k_N)` in `(x..., p...)` order.
pub fn input_covariance(prof: &SqueezingProfile) -> RealMatrix {
    let k = prof.variances();
    let diag: Vec<f64> = k.iter().map(|v| 1.0 / v).chain(k.iter().copied()).collect();
    RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

/// `Σ_out = S Σ_in Sᵀ` for a symplectic `S`.
pub fn covariance_propagate(s: &RealMatrix, sigma_in: &RealMatrix) -> Result<RealMatrix> {
    if sigma_in.shape() != s.shape() {
        return Err(Error::dimension(
            "covariance",
            format!("{}x{}", s.nrows(), s.ncols()),
            format!("{}x{}", sigma_in.nrows(), sigma_in.ncols()),
        ));
    }
    let res = check_symplectic(s)?;
    if res > 1e-8 {
        return Err(Error::Validation(format!(
            "transform is not symplectic (residual {res:e})"
        )));
    }
    Ok(s * sigma_in * s.transpose())
}

/// Row `i` is the quadrature vector of `δ_i = p_i − Σ_l V_il x_l`.
pub fn nullifier_rows(g: &AdjacencyGraph) -> RealMatrix {
    let n = g.n();
    let mut d = RealMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for l in 0..n {
            d[(i, l)] = -g.adjacency()[(i, l)];
        }
        d[(i, n + i)] = 1.0;
    }
    d
}

/// `d_i Σ d_iᵀ` for every nullifier row `d_i`.
pub fn nullifier_variances_from_covariance(
    g: &AdjacencyGraph,
    sigma: &RealMatrix,
) -> Result<Vec<f64>> {
    let n = g.n();
    if sigma.shape() != (2 * n, 2 * n) {
        return Err(Error::dimension(
            "covariance",
            format!("{0}x{0}", 2 * n),
            format!("{}x{}", sigma.nrows(), sigma.ncols()),
        ));
    }
    let d = nullifier_rows(g);
    Ok((&d * sigma * d.transpose())
        .diagonal()
        .iter()
        .copied()
        .collect())
}

/// Mean of `Δ²δ_i / Δ²δ_i⁰`.
pub fn fitness_f1(g: &AdjacencyGraph, theta: &AngleVector, prof: &SqueezingProfile) -> Result<f64> {
    Ok(nullifier_report(g, theta, prof)?.f1)
}

/// Mean of `Δ²δ_i − Δ²δ_i⁰`.
pub fn fitness_f1_alt(
    g: &AdjacencyGraph,
    theta: &AngleVector,
    prof: &SqueezingProfile,
) -> Result<f64> {
    Ok(nullifier_report(g, theta, prof)?.f1_alt)
}

pub fn nullifier_report(
    g: &AdjacencyGraph,
    theta: &AngleVector,
    prof: &SqueezingProfile,
) -> Result<NullifierReport> {
    let vars = nullifier_variances(g, theta, prof)?;
    Ok(NullifierReport::new(vars, shot_noise_variances(g)))
}

/// Which nullifier figure of merit to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NullifierFitness {
    #[default]
    Normalized,
    Difference,
}

/// Nullifier fitness over `θ` with the per-graph factorization cached.
///
/// Components reported to the optimizer trace are the normalized variances.
#[derive(Debug, Clone)]
pub struct ClusterObjective {
    net: ClusterNetwork,
    k: Vec<f64>,
    shot: Vec<f64>,
    kind: NullifierFitness,
}

impl ClusterObjective {
    pub fn new(
        g: &AdjacencyGraph,
        prof: &SqueezingProfile,
        kind: NullifierFitness,
    ) -> Result<Self> {
        prof.expect_len(g.n(), "squeezing profile")?;
        Ok(ClusterObjective {
            net: ClusterNetwork::new(g)?,
            k: prof.variances(),
            shot: shot_noise_variances(g),
            kind,
        })
    }

    pub fn dim(&self) -> usize {
        self.net.angle_dim()
    }

    pub fn report(&self, theta: &[f64]) -> NullifierReport {
        NullifierReport::new(self.variances(theta), self.shot.clone())
    }

    fn variances(&self, theta: &[f64]) -> Vec<f64> {
        let o = self
            .net
            .orthogonal(&AngleVector::new(theta.to_vec()))
            .expect("optimizer passes angle vectors of the objective's dimension");
        diag_congruence(&(self.net.nullifier_root() * o), &self.k)
    }
}

impl Objective for ClusterObjective {
    fn fitness(&self, theta: &[f64]) -> f64 {
        let r = self.report(theta);
        match self.kind {
            NullifierFitness::Normalized => r.f1,
            NullifierFitness::Difference => r.f1_alt,
        }
    }

    fn components(&self, theta: &[f64]) -> Option<Vec<f64>> {
        Some(self.report(theta).normalized)
    }
}
