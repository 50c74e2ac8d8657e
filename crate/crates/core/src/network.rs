//! Synthesis of the linear-optics unitary that turns independently squeezed modes into a
//! cluster state with a prescribed graph.
//!
//! A unitary `U = X + iY` produces the cluster of graph `V` when `Y = V X`. Together with
//! unitarity this forces `X Xᵀ = (V² + I)⁻¹`, so every solution has the form
//!
//! ```text
//! U(θ) = (I + iV) (V² + I)^{-1/2} O(θ)
//! ```
//!
//! with `O(θ)` real orthogonal. `θ = 0` gives the symmetric solution `U = Uᵀ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::AdjacencyGraph;
use crate::linalg::{
    complex_from_parts, givens_orthogonal, imag_part, inv_sqrt_spd, max_abs, real_part,
    unitarity_residual, AngleVector, ComplexMatrix, RealMatrix, Tolerances,
};

/// Per-graph data shared by every `U(θ)`: the symmetric solution and `X_s + V Y_s`.
#[derive(Debug, Clone)]
pub struct ClusterNetwork {
    graph: AdjacencyGraph,
    xs: RealMatrix,
    ys: RealMatrix,
    nullifier_root: RealMatrix,
}

impl ClusterNetwork {
    pub fn new(graph: &AdjacencyGraph) -> Result<Self> {
        let v = graph.adjacency();
        let xs = inv_sqrt_spd(&graph.v2_plus_identity())?;
        let ys = v * &xs;
        let nullifier_root = &xs + v * &ys;
        Ok(ClusterNetwork {
            graph: graph.clone(),
            xs,
            ys,
            nullifier_root,
        })
    }

    pub fn graph(&self) -> &AdjacencyGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Number of free angles, `N(N-1)/2`.
    pub fn angle_dim(&self) -> usize {
        AngleVector::dim_for_modes(self.n())
    }

    /// `X_s + V Y_s = (V² + I)^{1/2}`; nullifiers read `δ = (X_s + V Y_s) O p_squ`.
    pub fn nullifier_root(&self) -> &RealMatrix {
        &self.nullifier_root
    }

    pub fn orthogonal(&self, theta: &AngleVector) -> Result<RealMatrix> {
        givens_orthogonal(theta, self.n())
    }

    pub fn symmetric(&self) -> NetworkUnitary {
        NetworkUnitary::from_parts(self.xs.clone(), self.ys.clone(), None)
    }

    pub fn unitary(&self, theta: &AngleVector) -> Result<NetworkUnitary> {
        let o = self.orthogonal(theta)?;
        Ok(NetworkUnitary::from_parts(
            &self.xs * &o,
            &self.ys * &o,
            Some(theta.clone()),
        ))
    }
}

/// A mode-space unitary together with its cached real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkUnitary {
    u: ComplexMatrix,
    x: RealMatrix,
    y: RealMatrix,
    theta: Option<AngleVector>,
}

impl NetworkUnitary {
    fn from_parts(x: RealMatrix, y: RealMatrix, theta: Option<AngleVector>) -> Self {
        NetworkUnitary {
            u: complex_from_parts(&x, &y),
            x,
            y,
            theta,
        }
    }

    /// Wraps an externally supplied matrix (e.g. a fixture).
    ///
    /// `tol.unitarity` bounds `‖U U† − I‖_max`; loosen it for matrices rounded to a few digits.
    pub fn from_matrix(u: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if u.nrows() != u.ncols() || u.nrows() == 0 {
            return Err(Error::dimension(
                "unitary",
                "non-empty square matrix",
                format!("{}x{}", u.nrows(), u.ncols()),
            ));
        }
        let res = unitarity_residual(&u);
        if res > tol.unitarity {
            return Err(Error::Validation(format!(
                "matrix is not unitary (residual {res:e})"
            )));
        }
        Ok(NetworkUnitary {
            x: real_part(&u),
            y: imag_part(&u),
            u,
            theta: None,
        })
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn x(&self) -> &RealMatrix {
        &self.x
    }

    pub fn y(&self) -> &RealMatrix {
        &self.y
    }

    /// Angles used to build `O(θ)`; `None` for the symmetric solution and imported matrices.
    pub fn theta(&self) -> Option<&AngleVector> {
        self.theta.as_ref()
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.u)
    }

    /// Coefficients of each nullifier on the squeezed momenta, `X + V Y`.
    ///
    /// Only meaningful once the cluster condition holds for `graph`.
    pub fn nullifier_coefficients(&self, graph: &AdjacencyGraph) -> Result<RealMatrix> {
        check_dims(self, graph)?;
        Ok(&self.x + graph.adjacency() * &self.y)
    }

    pub fn export(&self, graph: &AdjacencyGraph) -> UnitaryExport {
        UnitaryExport {
            n: self.n(),
            entries: self.u.transpose().iter().map(|z| [z.re, z.im]).collect(),
            theta: self
                .theta
                .as_ref()
                .map(|t| t.as_slice().to_vec())
                .unwrap_or_else(|| vec![0.0; AngleVector::dim_for_modes(self.n())]),
            graph_hash: graph.hash(),
        }
    }
}

/// JSON export: row-major `[re, im]` pairs plus the angles and the source graph hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryExport {
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
    pub theta: Vec<f64>,
    pub graph_hash: String,
}

impl UnitaryExport {
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.n * self.n {
            return Err(Error::dimension(
                "entries",
                self.n * self.n,
                self.entries.len(),
            ));
        }
        Ok(ComplexMatrix::from_row_iterator(
            self.n,
            self.n,
            self.entries
                .iter()
                .map(|[re, im]| crate::linalg::Complex64::new(*re, *im)),
        ))
    }
}

fn check_dims(u: &NetworkUnitary, g: &AdjacencyGraph) -> Result<()> {
    if u.n() != g.n() {
        return Err(Error::dimension("unitary vs graph", g.n(), u.n()));
    }
    Ok(())
}

/// `U_s = (I + iV)(V² + I)^{-1/2}`.
pub fn symmetric_unitary(g: &AdjacencyGraph) -> Result<NetworkUnitary> {
    Ok(ClusterNetwork::new(g)?.symmetric())
}

/// `U(θ) = (I + iV)(V² + I)^{-1/2} O(θ)`.
pub fn cluster_unitary(g: &AdjacencyGraph, theta: &AngleVector) -> Result<NetworkUnitary> {
    ClusterNetwork::new(g)?.unitary(theta)
}

/// `‖Y − V X‖_max`.
pub fn verify_cluster_condition(u: &NetworkUnitary, g: &AdjacencyGraph) -> Result<f64> {
    check_dims(u, g)?;
    Ok(max_abs(&(u.y() - g.adjacency() * u.x())))
}
