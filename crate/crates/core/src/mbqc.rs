//! Single-mode measurement-based computation on a finitely squeezed cluster.
//!
//! Mode `0` carries the input state; modes `1..=N` are the cluster modes produced by
//! `U_V(θ)`. The full transform is
//!
//! ```text
//! U_comp = D_meas · U_BS · (1 ⊕ U_V(θ))
//! ```
//!
//! after which the `p` quadrature of every measured mode is read out. In the Heisenberg
//! picture each measured `p'_m` becomes a classical number, so the measured rows give `N`
//! linear equations that are solved for the anti-squeezed `x_j^squ`. Substituting the
//! solution into the output mode leaves the implemented gate on `(x_in, p_in)`, the
//! displacement from the outcomes, and residual noise proportional to the squeezed
//! `p_j^squ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::es::Objective;
use crate::graph::AdjacencyGraph;
use crate::linalg::{
    quadrature_blocks, unitarity_residual, AngleVector, Complex64, ComplexMatrix, RealMatrix,
    Tolerances,
};
use crate::network::{ClusterNetwork, NetworkUnitary};
use crate::noise::SqueezingProfile;

mod complex_pairs {
    use super::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}

/// Where the input is attached, which quadrature each mode is measured in, and which
/// mode carries the result.
///
/// Every measurement reads `p` after the phase `d_meas[m]`; measuring `x` on mode `m`
/// is expressed as `d_meas[m] = i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    /// `(input mode, cluster mode)` coupled by the 50:50 beamsplitter.
    pub bs_pair: (usize, usize),
    /// Unit-modulus phase per mode, `[re, im]` pairs in JSON.
    #[serde(with = "complex_pairs")]
    pub d_meas: Vec<Complex64>,
    pub measured: Vec<usize>,
    pub output: usize,
}

impl MeasurementPlan {
    /// Fourier transform on a three-mode linear cluster: `x_in` and `x_1` are measured
    /// (phase `i`), then `p_2`; the result appears on mode 3.
    pub fn fourier() -> Self {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        MeasurementPlan {
            bs_pair: (0, 1),
            d_meas: vec![i, i, one, one],
            measured: vec![0, 1, 2],
            output: 3,
        }
    }

    /// Total mode count, input included.
    pub fn modes(&self) -> usize {
        self.d_meas.len()
    }

    pub fn validate(&self, cluster_modes: usize) -> Result<()> {
        let total = cluster_modes + 1;
        if self.d_meas.len() != total {
            return Err(Error::dimension("plan.d_meas", total, self.d_meas.len()));
        }
        for (i, z) in self.d_meas.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() || (z.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidPlan(format!(
                    "plan.d_meas[{i}] = {z} does not have unit modulus"
                )));
            }
        }
        let (a, b) = self.bs_pair;
        if a != 0 || b == 0 || b >= total {
            return Err(Error::InvalidPlan(format!(
                "plan.bs_pair must couple the input mode 0 to a cluster mode in 1..={cluster_modes}, got ({a}, {b})"
            )));
        }
        if self.measured.len() != cluster_modes {
            return Err(Error::InvalidPlan(format!(
                "plan.measured must list {cluster_modes} modes, got {}",
                self.measured.len()
            )));
        }
        let mut seen = vec![false; total];
        for &m in self.measured.iter().chain(std::iter::once(&self.output)) {
            if m >= total {
                return Err(Error::InvalidPlan(format!(
                    "mode index {m} out of range 0..{total}"
                )));
            }
            if seen[m] {
                return Err(Error::InvalidPlan(format!(
                    "mode {m} appears more than once in plan.measured/plan.output"
                )));
            }
            seen[m] = true;
        }
        Ok(())
    }
}

/// Gate, noise and displacement coefficients of the output mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MbqcOutcome {
    /// Rows `x_out`, `p_out`; columns `x_in`, `p_in`.
    pub gate: [[f64; 2]; 2],
    /// Coefficients on the squeezed `p_j^squ` of cluster modes `1..=N`.
    pub noise_x: Vec<f64>,
    pub noise_p: Vec<f64>,
    /// Coefficients on the outcomes `p'_m`, in `plan.measured` order.
    pub displacement_x: Vec<f64>,
    pub displacement_p: Vec<f64>,
    /// Largest leftover coefficient on any anti-squeezed `x_j^squ`.
    pub antisqueezed_residual: f64,
}

impl MbqcOutcome {
    pub fn gate_determinant(&self) -> f64 {
        self.gate[0][0] * self.gate[1][1] - self.gate[0][1] * self.gate[1][0]
    }
}

/// Output excess noise in units of shot noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcessNoise {
    pub var_x: f64,
    pub var_p: f64,
    pub f2: f64,
}

/// Expansion of the output noise over the cluster nullifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullifierDecomposition {
    pub c_x: Vec<f64>,
    pub c_p: Vec<f64>,
    pub residual: f64,
}

/// Identity on `n_total` modes except `[[1, i], [i, 1]]/√2` on modes `(i, j)`.
pub fn beamsplitter_unitary(n_total: usize, i: usize, j: usize) -> Result<ComplexMatrix> {
    if i == j || i >= n_total || j >= n_total {
        return Err(Error::dimension(
            "beamsplitter modes",
            format!("two distinct indices below {n_total}"),
            format!("({i}, {j})"),
        ));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = ComplexMatrix::identity(n_total, n_total);
    u[(i, i)] = Complex64::new(h, 0.0);
    u[(j, j)] = Complex64::new(h, 0.0);
    u[(i, j)] = Complex64::new(0.0, h);
    u[(j, i)] = Complex64::new(0.0, h);
    Ok(u)
}

/// `D_meas · U_BS · (1 ⊕ U_cluster)`.
pub fn compose_computation(
    cluster: &NetworkUnitary,
    plan: &MeasurementPlan,
) -> Result<ComplexMatrix> {
    let n = cluster.n();
    plan.validate(n)?;
    let total = n + 1;
    let mut embedded = ComplexMatrix::identity(total, total);
    embedded
        .view_mut((1, 1), (n, n))
        .copy_from(cluster.matrix());
    let bs = beamsplitter_unitary(total, plan.bs_pair.0, plan.bs_pair.1)?;
    let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(plan.d_meas.clone()));
    Ok(d * bs * embedded)
}

/// Builds `U_V(θ)` for the graph and composes it with the plan.
pub fn compose_for(
    g: &AdjacencyGraph,
    theta: &AngleVector,
    plan: &MeasurementPlan,
) -> Result<ComplexMatrix> {
    compose_computation(&crate::network::cluster_unitary(g, theta)?, plan)
}

pub fn eliminate_and_project(
    u_comp: &ComplexMatrix,
    plan: &MeasurementPlan,
) -> Result<MbqcOutcome> {
    eliminate_and_project_with(u_comp, plan, &Tolerances::default())
}

/// Measurement elimination over the quadrature representation of `u_comp`.
pub fn eliminate_and_project_with(
    u_comp: &ComplexMatrix,
    plan: &MeasurementPlan,
    tol: &Tolerances,
) -> Result<MbqcOutcome> {
    let total = u_comp.nrows();
    if total < 2 || u_comp.ncols() != total {
        return Err(Error::dimension(
            "U_comp",
            "square matrix with at least 2 modes",
            format!("{}x{}", u_comp.nrows(), u_comp.ncols()),
        ));
    }
    let n = total - 1;
    plan.validate(n)?;
    let res = unitarity_residual(u_comp);
    if res > tol.unitarity {
        return Err(Error::Validation(format!(
            "U_comp is not unitary (residual {res:e})"
        )));
    }

    // columns: x_0..x_n, p_0..p_n; rows: x'_0..x'_n, p'_0..p'_n
    let s = quadrature_blocks(u_comp);
    let x_col = |mode: usize| mode;
    let p_col = |mode: usize| total + mode;

    let meas_rows = RealMatrix::from_fn(n, 2 * total, |r, c| s[(p_col(plan.measured[r]), c)]);
    let a = RealMatrix::from_fn(n, n, |r, j| meas_rows[(r, x_col(j + 1))]);

    let svd = a.clone().svd(false, false);
    let smin = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if smin.is_nan() || smin <= 1e-10 {
        return Err(Error::InvalidPlan(format!(
            "measured rows cannot eliminate the anti-squeezed quadratures (smallest singular value {smin:e})"
        )));
    }
    let a_inv = a.try_inverse().expect("nonsingular after SVD check");

    let project = |row_index: usize| -> (Vec<f64>, Vec<f64>, f64) {
        let row = s.row(row_index).transpose();
        // solve Aᵀ t = b, where b are the row's coefficients on x_1..x_n
        let b = nalgebra::DVector::from_fn(n, |j, _| row[x_col(j + 1)]);
        let t = a_inv.transpose() * b;
        let reduced = row - meas_rows.transpose() * &t;
        let resid = (1..=n).map(|j| reduced[x_col(j)].abs()).fold(0.0, f64::max);
        let coeffs = vec![reduced[x_col(0)], reduced[p_col(0)]]
            .into_iter()
            .chain((1..=n).map(|j| reduced[p_col(j)]))
            .collect();
        (coeffs, t.iter().copied().collect(), resid)
    };

    let (cx, dx, rx) = project(x_col(plan.output));
    let (cp, dp, rp) = project(p_col(plan.output));
    Ok(MbqcOutcome {
        gate: [[cx[0], cx[1]], [cp[0], cp[1]]],
        noise_x: cx[2..].to_vec(),
        noise_p: cp[2..].to_vec(),
        displacement_x: dx,
        displacement_p: dp,
        antisqueezed_residual: rx.max(rp),
    })
}

/// `var_x = Σ noise_x_j² k_j`, `var_p = Σ noise_p_j² k_j`.
pub fn extra_noise_variances(
    outcome: &MbqcOutcome,
    prof: &SqueezingProfile,
) -> Result<ExcessNoise> {
    prof.expect_len(outcome.noise_x.len(), "cluster squeezing profile")?;
    let k = prof.variances();
    let weigh = |c: &[f64]| c.iter().zip(&k).map(|(a, kj)| a * a * kj).sum::<f64>();
    let var_x = weigh(&outcome.noise_x);
    let var_p = weigh(&outcome.noise_p);
    Ok(ExcessNoise {
        var_x,
        var_p,
        f2: var_x + var_p,
    })
}

/// Solves `noise = cᵀ N_c` for the nullifier matrix `N_c = X + V Y` of `cluster`.
pub fn nullifier_decomposition(
    outcome: &MbqcOutcome,
    cluster: &NetworkUnitary,
    g: &AdjacencyGraph,
) -> Result<NullifierDecomposition> {
    let nc = cluster.nullifier_coefficients(g)?;
    let n = nc.nrows();
    if outcome.noise_x.len() != n {
        return Err(Error::dimension("noise vectors", n, outcome.noise_x.len()));
    }
    let lu = nc.transpose().lu();
    let solve = |noise: &[f64]| -> Result<(Vec<f64>, f64)> {
        let b = nalgebra::DVector::from_column_slice(noise);
        let c = lu
            .solve(&b)
            .ok_or_else(|| Error::Singular("nullifier coefficient matrix".into()))?;
        let back = nc.transpose() * &c;
        let resid = (back - b).amax();
        Ok((c.iter().copied().collect(), resid))
    };
    let (c_x, rx) = solve(&outcome.noise_x)?;
    let (c_p, rp) = solve(&outcome.noise_p)?;
    Ok(NullifierDecomposition {
        c_x,
        c_p,
        residual: rx.max(rp),
    })
}

pub fn mbqc_noise(
    g: &AdjacencyGraph,
    theta: &AngleVector,
    plan: &MeasurementPlan,
    prof: &SqueezingProfile,
) -> Result<(MbqcOutcome, ExcessNoise)> {
    let outcome = eliminate_and_project(&compose_for(g, theta, plan)?, plan)?;
    let noise = extra_noise_variances(&outcome, prof)?;
    Ok((outcome, noise))
}

/// `Δ²x_extra + Δ²p_extra`.
pub fn fitness_f2(
    g: &AdjacencyGraph,
    theta: &AngleVector,
    plan: &MeasurementPlan,
    prof: &SqueezingProfile,
) -> Result<f64> {
    Ok(mbqc_noise(g, theta, plan, prof)?.1.f2)
}

/// Excess-noise fitness over `θ`, validated once up front.
#[derive(Debug, Clone)]
pub struct MbqcObjective {
    net: ClusterNetwork,
    plan: MeasurementPlan,
    prof: SqueezingProfile,
}

impl MbqcObjective {
    pub fn new(
        g: &AdjacencyGraph,
        plan: &MeasurementPlan,
        prof: &SqueezingProfile,
    ) -> Result<Self> {
        let net = ClusterNetwork::new(g)?;
        prof.expect_len(g.n(), "cluster squeezing profile")?;
        let obj = MbqcObjective {
            net,
            plan: plan.clone(),
            prof: prof.clone(),
        };
        obj.evaluate(&vec![0.0; obj.dim()])?;
        Ok(obj)
    }

    pub fn dim(&self) -> usize {
        self.net.angle_dim()
    }

    pub fn evaluate(&self, theta: &[f64]) -> Result<(MbqcOutcome, ExcessNoise)> {
        let u = self.net.unitary(&AngleVector::new(theta.to_vec()))?;
        let outcome = eliminate_and_project(&compose_computation(&u, &self.plan)?, &self.plan)?;
        let noise = extra_noise_variances(&outcome, &self.prof)?;
        Ok((outcome, noise))
    }
}

impl Objective for MbqcObjective {
    fn fitness(&self, theta: &[f64]) -> f64 {
        // a plan that eliminates at θ = 0 can still turn singular elsewhere
        self.evaluate(theta)
            .map(|(_, n)| n.f2)
            .unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{check_symplectic, quadrature_symplectic};
    use crate::noise::{covariance_propagate, input_covariance};

    #[test]
    fn beamsplitter_block() {
        let u = beamsplitter_unitary(4, 0, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(u[(0, 1)], Complex64::new(0.0, h));
        assert_eq!(u[(1, 0)], Complex64::new(0.0, h));
        assert_eq!(u[(0, 0)], Complex64::new(h, 0.0));
        assert_eq!(u[(2, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(2, 3)], Complex64::new(0.0, 0.0));
        assert!(unitarity_residual(&u) < 1e-12);
        assert!(beamsplitter_unitary(4, 2, 2).is_err());
        assert!(beamsplitter_unitary(4, 0, 4).is_err());
    }

    #[test]
    fn beamsplitter_twice_on_vacuum() {
        let u = beamsplitter_unitary(3, 0, 2).unwrap();
        let s = quadrature_symplectic(&(&u * &u)).unwrap();
        assert!(check_symplectic(&s).unwrap() < 1e-10);
        let out =
            covariance_propagate(&s, &input_covariance(&SqueezingProfile::vacuum(3))).unwrap();
        assert!((out - RealMatrix::identity(6, 6)).amax() < 1e-12);
    }

    #[test]
    fn trivial_composition_is_beamsplitter() {
        let g = AdjacencyGraph::linear_cluster(1).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let plan = MeasurementPlan {
            bs_pair: (0, 1),
            d_meas: vec![one, one],
            measured: vec![0],
            output: 1,
        };
        let u = compose_for(&g, &AngleVector::zeros(0), &plan).unwrap();
        assert_eq!(u, beamsplitter_unitary(2, 0, 1).unwrap());
    }

    #[test]
    fn plan_validation() {
        let mut p = MeasurementPlan::fourier();
        assert!(p.validate(3).is_ok());
        assert!(p.validate(2).is_err());
        p.d_meas[0] = Complex64::new(2.0, 0.0);
        assert!(matches!(p.validate(3), Err(Error::InvalidPlan(_))));
        let mut p = MeasurementPlan::fourier();
        p.output = 2;
        assert!(matches!(p.validate(3), Err(Error::InvalidPlan(_))));
        let mut p = MeasurementPlan::fourier();
        p.bs_pair = (1, 2);
        assert!(p.validate(3).is_err());
    }

    #[test]
    fn singular_plan_is_reported() {
        // an empty graph makes U_V real, so unrotated measured rows carry no x_j^squ terms
        let g = AdjacencyGraph::from_edges(3, &[]).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let plan = MeasurementPlan {
            bs_pair: (0, 1),
            d_meas: vec![one; 4],
            measured: vec![0, 1, 2],
            output: 3,
        };
        let u = compose_for(&g, &AngleVector::zeros(3), &plan).unwrap();
        assert!(matches!(
            eliminate_and_project(&u, &plan),
            Err(Error::InvalidPlan(_))
        ));
    }

    #[test]
    fn plan_json_shape() {
        let json = serde_json::to_string(&MeasurementPlan::fourier()).unwrap();
        assert_eq!(
            json,
            r#"{"bs_pair":[0,1],"d_meas":[[0.0,1.0],[0.0,1.0],[1.0,0.0],[1.0,0.0]],"measured":[0,1,2],"output":3}"#
        );
        let back: MeasurementPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(back, MeasurementPlan::fourier());
    }

    #[test]
    fn zero_noise_decomposes_to_zero() {
        let g = AdjacencyGraph::linear_cluster(3).unwrap();
        let u = crate::network::symmetric_unitary(&g).unwrap();
        let outcome = MbqcOutcome {
            gate: [[0.0, -1.0], [1.0, 0.0]],
            noise_x: vec![0.0; 3],
            noise_p: vec![0.0; 3],
            displacement_x: vec![],
            displacement_p: vec![],
            antisqueezed_residual: 0.0,
        };
        let d = nullifier_decomposition(&outcome, &u, &g).unwrap();
        assert_eq!(d.c_x, vec![0.0; 3]);
        assert_eq!(d.c_p, vec![0.0; 3]);
    }

    #[test]
    fn vacuum_f2_is_five() {
        let g = AdjacencyGraph::linear_cluster(3).unwrap();
        let f2 = fitness_f2(
            &g,
            &AngleVector::new(vec![0.4, 1.3, -2.0]),
            &MeasurementPlan::fourier(),
            &SqueezingProfile::vacuum(3),
        )
        .unwrap();
        assert!((f2 - 5.0).abs() < 1e-10);
    }

    #[test]
    fn profile_length_checked() {
        let g = AdjacencyGraph::linear_cluster(3).unwrap();
        let err = fitness_f2(
            &g,
            &AngleVector::zeros(3),
            &MeasurementPlan::fourier(),
            &SqueezingProfile::vacuum(4),
        );
        assert!(matches!(err, Err(Error::Dimension { .. })));
    }
}
