//! Weighted cluster graphs.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

/// JSON form of a graph: `{"n": 4, "edges": [[0, 1, 1.0], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize, f64)>,
}

/// Real symmetric adjacency matrix `V` with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyGraph {
    v: RealMatrix,
}

impl AdjacencyGraph {
    /// Path graph `0 - 1 - ... - (n-1)` with unit weights.
    pub fn linear_cluster(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
        Self::from_edges(n, &edges)
    }

    /// Cycle on `n ≥ 3` nodes with unit weights.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Validation(format!(
                "a ring needs at least 3 nodes, got {n}"
            )));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
        Self::from_edges(n, &edges)
    }

    /// Rectangular `rows x cols` lattice, nodes numbered row-major.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let k = r * cols + c;
                if c + 1 < cols {
                    edges.push((k, k + 1, 1.0));
                }
                if r + 1 < rows {
                    edges.push((k, k + cols, 1.0));
                }
            }
        }
        Self::from_edges(rows * cols, &edges)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::dimension("graph", "at least one node", 0));
        }
        let mut v = RealMatrix::zeros(n, n);
        let mut seen = vec![false; n * n];
        for (k, &(i, j, w)) in edges.iter().enumerate() {
            if i >= n || j >= n {
                return Err(Error::dimension(
                    format!("edges[{k}]"),
                    format!("node indices below {n}"),
                    format!("({i}, {j})"),
                ));
            }
            if i == j {
                return Err(Error::Validation(format!(
                    "edges[{k}]: self-loop on node {i}"
                )));
            }
            if !w.is_finite() {
                return Err(Error::Validation(format!(
                    "edges[{k}]: weight {w} is not finite"
                )));
            }
            let (a, b) = (i.min(j), i.max(j));
            if seen[a * n + b] {
                return Err(Error::Validation(format!(
                    "edges[{k}]: duplicate edge ({a}, {b})"
                )));
            }
            seen[a * n + b] = true;
            v[(i, j)] = w;
            v[(j, i)] = w;
        }
        Ok(AdjacencyGraph { v })
    }

    /// Accepts an explicit adjacency matrix; it must be exactly symmetric with a zero diagonal.
    pub fn from_matrix(v: RealMatrix) -> Result<Self> {
        if v.nrows() != v.ncols() || v.nrows() == 0 {
            return Err(Error::dimension(
                "adjacency matrix",
                "non-empty square matrix",
                format!("{}x{}", v.nrows(), v.ncols()),
            ));
        }
        let n = v.nrows();
        for i in 0..n {
            if v[(i, i)] != 0.0 {
                return Err(Error::Validation(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if !v[(i, j)].is_finite() || v[(i, j)] != v[(j, i)] {
                    return Err(Error::Validation(format!(
                        "entry ({i}, {j}) is not finite or breaks symmetry"
                    )));
                }
            }
        }
        Ok(AdjacencyGraph { v })
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self> {
        Self::from_edges(spec.n, &spec.edges)
    }

    pub fn to_spec(&self) -> GraphSpec {
        let n = self.n();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.v[(i, j)] != 0.0 {
                    edges.push((i, j, self.v[(i, j)]));
                }
            }
        }
        GraphSpec { n, edges }
    }

    pub fn n(&self) -> usize {
        self.v.nrows()
    }

    pub fn adjacency(&self) -> &RealMatrix {
        &self.v
    }

    /// `V² + I`, whose diagonal is the vacuum nullifier variance of each node.
    pub fn v2_plus_identity(&self) -> RealMatrix {
        &self.v * &self.v + RealMatrix::identity(self.n(), self.n())
    }

    /// SHA-256 (hex) of the canonical edge-list JSON, used to tag exported unitaries.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(&self.to_spec()).expect("graph spec serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}
