//! Reference matrices for the three-mode Fourier-transform computation, shipped as
//! versioned JSON under `fixtures/`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, Tolerances};
use crate::network::NetworkUnitary;

/// Comparison tolerance for anything derived from a fixture.
pub const FIXTURE_TOLERANCE: f64 = 1e-7;

/// Unitarity tolerance accepted for the two-digit optimized fixture.
pub const TWO_DIGIT_UNITARITY_TOLERANCE: f64 = 1e-2;

const FOURIER_CLUSTER: &str = include_str!("../fixtures/fourier_cluster.json");
const FOURIER_COMP: &str = include_str!("../fixtures/fourier_comp.json");
const OPTIMIZED_CLUSTER: &str = include_str!("../fixtures/optimized_cluster.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub version: u32,
    pub name: String,
    pub description: String,
    pub provenance: String,
    pub n: usize,
    /// Row-major `[re, im]` pairs.
    pub entries: Vec<[f64; 2]>,
}

impl FixtureFile {
    pub fn parse(json: &str) -> Result<Self> {
        let f: FixtureFile =
            serde_json::from_str(json).map_err(|e| Error::Validation(format!("fixture: {e}")))?;
        if f.version != 1 {
            return Err(Error::Validation(format!(
                "fixture {}: unsupported version {}",
                f.name, f.version
            )));
        }
        if f.entries.len() != f.n * f.n {
            return Err(Error::dimension(
                format!("fixture {}", f.name),
                f.n * f.n,
                f.entries.len(),
            ));
        }
        Ok(f)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_row_iterator(
            self.n,
            self.n,
            self.entries.iter().map(|[re, im]| Complex64::new(*re, *im)),
        )
    }
}

fn builtin(json: &str) -> FixtureFile {
    FixtureFile::parse(json).expect("bundled fixture is well formed")
}

/// Fixed (non-optimized) cluster unitary on the three-mode linear cluster.
pub fn fourier_cluster() -> NetworkUnitary {
    NetworkUnitary::from_matrix(builtin(FOURIER_CLUSTER).matrix(), &Tolerances::default())
        .expect("fixture is unitary")
}

/// `D_meas · U_BS · (1 ⊕ U_clu)` for the fixed cluster unitary.
pub fn fourier_comp() -> ComplexMatrix {
    builtin(FOURIER_COMP).matrix()
}

/// Noise-optimized cluster unitary, only accurate to two significant digits.
pub fn optimized_cluster() -> NetworkUnitary {
    let tol = Tolerances {
        unitarity: TWO_DIGIT_UNITARITY_TOLERANCE,
        ..Tolerances::default()
    };
    NetworkUnitary::from_matrix(builtin(OPTIMIZED_CLUSTER).matrix(), &tol)
        .expect("fixture is unitary to two digits")
}

pub fn optimized_cluster_file() -> FixtureFile {
    builtin(OPTIMIZED_CLUSTER)
}
