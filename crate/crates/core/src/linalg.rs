//! Dense matrix primitives shared by the network, noise and MBQC modules.
//!
//! Quadrature vectors are ordered `(x_1, ..., x_N, p_1, ..., p_N)` throughout, and a
//! mode-space unitary `U = X + iY` acts on quadratures as the block matrix
//! `[[X, -Y], [Y, X]]`.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;
pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Numerical tolerances used by the validating routines.
///
/// Symmetry checks are scaled by `max(1, ‖M‖_max)`; every other tolerance is absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub symmetry: f64,
    pub unitarity: f64,
    pub symplectic: f64,
    /// Smallest eigenvalue accepted as positive by [`inv_sqrt_spd`].
    pub eigenvalue: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symmetry: 1e-12,
            unitarity: 1e-10,
            symplectic: 1e-10,
            eigenvalue: 1e-12,
        }
    }
}

/// Reduce an angle to `[-π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta - two_pi * ((theta + PI) / two_pi).floor();
    if t >= PI {
        t -= two_pi;
    }
    if t < -PI {
        t = -PI;
    }
    t
}

/// Rotation angles for the `N(N-1)/2` Givens planes of an `N`-mode orthogonal matrix.
///
/// Every stored angle lies in `[-π, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct AngleVector(Vec<f64>);

impl AngleVector {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        AngleVector(values.into().into_iter().map(wrap_angle).collect())
    }

    pub fn zeros(len: usize) -> Self {
        AngleVector(vec![0.0; len])
    }

    /// Number of angles needed to parameterize `SO(n)`.
    pub fn dim_for_modes(n: usize) -> usize {
        n * n.saturating_sub(1) / 2
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for AngleVector {
    fn from(v: Vec<f64>) -> Self {
        AngleVector::new(v)
    }
}

impl From<AngleVector> for Vec<f64> {
    fn from(a: AngleVector) -> Self {
        a.0
    }
}

/// Largest absolute entry.
pub fn max_abs(m: &RealMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// `‖U U† − I‖_max`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    let prod = u * u.adjoint();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn real_part(u: &ComplexMatrix) -> RealMatrix {
    u.map(|z| z.re)
}

pub fn imag_part(u: &ComplexMatrix) -> RealMatrix {
    u.map(|z| z.im)
}

pub fn complex_from_parts(x: &RealMatrix, y: &RealMatrix) -> ComplexMatrix {
    x.zip_map(y, Complex64::new)
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

fn symmetry_residual(m: &RealMatrix) -> f64 {
    max_abs(&(m - m.transpose()))
}

fn check_square(m_rows: usize, m_cols: usize, context: &str) -> Result<()> {
    if m_rows != m_cols {
        return Err(Error::dimension(
            context,
            "square matrix",
            format!("{m_rows}x{m_cols}"),
        ));
    }
    Ok(())
}

fn spd_power(m: &RealMatrix, power: f64, tol: &Tolerances) -> Result<RealMatrix> {
    check_square(m.nrows(), m.ncols(), "symmetric matrix power")?;
    let scale = max_abs(m).max(1.0);
    let asym = symmetry_residual(m);
    if asym > tol.symmetry * scale {
        return Err(Error::Validation(format!(
            "matrix is not symmetric (residual {asym:e})"
        )));
    }
    let eig = SymmetricEigen::new(m.clone());
    if let Some(min) = eig.eigenvalues.iter().copied().reduce(f64::min) {
        if min <= tol.eigenvalue {
            return Err(Error::Singular(format!(
                "eigenvalue {min:e} is not positive"
            )));
        }
    }
    let q = &eig.eigenvectors;
    let d = RealMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.powf(power)));
    let r = q * d * q.transpose();
    Ok((&r + r.transpose()) * 0.5)
}

/// Inverse square root of a symmetric positive-definite matrix via its eigendecomposition.
pub fn inv_sqrt_spd(m: &RealMatrix) -> Result<RealMatrix> {
    inv_sqrt_spd_with(m, &Tolerances::default())
}

pub fn inv_sqrt_spd_with(m: &RealMatrix, tol: &Tolerances) -> Result<RealMatrix> {
    spd_power(m, -0.5, tol)
}

/// Principal square root of a symmetric positive-definite matrix.
pub fn sqrt_spd(m: &RealMatrix) -> Result<RealMatrix> {
    spd_power(m, 0.5, &Tolerances::default())
}

/// Product of plane rotations in lexicographic plane order `(0,1), (0,2), ..., (n-2,n-1)`.
///
/// The rotation of plane `(i, j)` by `θ` maps `e_i ↦ cos θ e_i + sin θ e_j`, so for
/// `n = 2` and `θ = π/2` the result is `[[0, -1], [1, 0]]`.
///
/// Only `SO(n)` is reachable. The other coset `O·diag(-1, 1, ..., 1)` gives the same
/// `O K Oᵀ` for every diagonal `K`, so no noise figure depends on the missing sign.
pub fn givens_orthogonal(theta: &AngleVector, n: usize) -> Result<RealMatrix> {
    let expected = AngleVector::dim_for_modes(n);
    if theta.len() != expected {
        return Err(Error::dimension("angle vector", expected, theta.len()));
    }
    let mut o = RealMatrix::identity(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (s, c) = theta.as_slice()[k].sin_cos();
            // right-multiply by the rotation: only columns i and j change
            for r in 0..n {
                let oi = o[(r, i)];
                let oj = o[(r, j)];
                o[(r, i)] = c * oi + s * oj;
                o[(r, j)] = -s * oi + c * oj;
            }
            k += 1;
        }
    }
    Ok(o)
}

/// Real `2N×2N` quadrature representation `[[X, -Y], [Y, X]]` of a unitary `U = X + iY`.
pub fn quadrature_symplectic(u: &ComplexMatrix) -> Result<RealMatrix> {
    quadrature_symplectic_with(u, &Tolerances::default())
}

pub fn quadrature_symplectic_with(u: &ComplexMatrix, tol: &Tolerances) -> Result<RealMatrix> {
    check_square(u.nrows(), u.ncols(), "unitary")?;
    let res = unitarity_residual(u);
    if res > tol.unitarity {
        return Err(Error::Validation(format!(
            "matrix is not unitary (residual {res:e})"
        )));
    }
    Ok(quadrature_blocks(u))
}

/// Block matrix `[[X, -Y], [Y, X]]` without validation.
pub(crate) fn quadrature_blocks(u: &ComplexMatrix) -> RealMatrix {
    let n = u.nrows();
    let mut s = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = u[(i, j)];
            s[(i, j)] = z.re;
            s[(i, j + n)] = -z.im;
            s[(i + n, j)] = z.im;
            s[(i + n, j + n)] = z.re;
        }
    }
    s
}

/// Canonical form `Ω = [[0, I], [-I, 0]]` for the `(x..., p...)` ordering.
pub fn symplectic_form(n: usize) -> RealMatrix {
    let mut omega = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        omega[(i, i + n)] = 1.0;
        omega[(i + n, i)] = -1.0;
    }
    omega
}

/// Max-norm residual `‖S Ω Sᵀ − Ω‖_max`.
///
/// For a passive transform `[[X, -Y], [Y, X]]` the blocks of `S Ω Sᵀ − Ω` are exactly
/// `X Xᵀ + Y Yᵀ − I` and `Y Xᵀ − X Yᵀ`, so the residual is the larger violation of
/// those two conditions. General (active) symplectic matrices are handled too.
pub fn check_symplectic(s: &RealMatrix) -> Result<f64> {
    check_square(s.nrows(), s.ncols(), "symplectic check")?;
    if !s.nrows().is_multiple_of(2) {
        return Err(Error::dimension(
            "symplectic check",
            "even dimension",
            s.nrows(),
        ));
    }
    let omega = symplectic_form(s.nrows() / 2);
    Ok(max_abs(&(s * &omega * s.transpose() - &omega)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert_eq!(wrap_angle(PI), -PI);
        assert!((wrap_angle(3.0 * PI + 0.25) - (-PI + 0.25)).abs() < 1e-12);
        assert!((wrap_angle(-PI - 0.1) - (PI - 0.1)).abs() < 1e-12);
        for k in -50..50 {
            let t = wrap_angle(k as f64 * 0.77);
            assert!((-PI..PI).contains(&t));
        }
    }

    #[test]
    fn inv_sqrt_identity() {
        let r = inv_sqrt_spd(&RealMatrix::identity(5, 5)).unwrap();
        assert!(max_abs(&(r - RealMatrix::identity(5, 5))) < 1e-15);
    }

    #[test]
    fn inv_sqrt_two_identity() {
        let m = RealMatrix::identity(2, 2) * 2.0;
        let r = inv_sqrt_spd(&m).unwrap();
        let expected = RealMatrix::identity(2, 2) * FRAC_1_SQRT_2;
        assert!(max_abs(&(r - expected)) < 1e-15);
    }

    #[test]
    fn inv_sqrt_chain_multiply_back() {
        // V² + I for the 3-chain
        let m = RealMatrix::from_row_slice(3, 3, &[2.0, 0.0, 1.0, 0.0, 3.0, 0.0, 1.0, 0.0, 2.0]);
        let r = inv_sqrt_spd(&m).unwrap();
        let back = &r * &r * &m;
        assert!(max_abs(&(back - RealMatrix::identity(3, 3))) < 1e-10);
        assert_eq!(symmetry_residual(&r), 0.0);
    }

    #[test]
    fn inv_sqrt_rejects_asymmetric_and_singular() {
        let m = RealMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(inv_sqrt_spd(&m), Err(Error::Validation(_))));
        let m = RealMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(inv_sqrt_spd(&m), Err(Error::Singular(_))));
        let m = RealMatrix::zeros(2, 3);
        assert!(matches!(inv_sqrt_spd(&m), Err(Error::Dimension { .. })));
    }

    #[test]
    fn givens_zero_is_identity() {
        let o = givens_orthogonal(&AngleVector::zeros(6), 4).unwrap();
        assert_eq!(o, RealMatrix::identity(4, 4));
    }

    #[test]
    fn givens_quarter_turn() {
        let o = givens_orthogonal(&AngleVector::new(vec![PI / 2.0]), 2).unwrap();
        let expected = RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(max_abs(&(o - expected)) < 1e-15);
    }

    #[test]
    fn givens_plane_order() {
        // n = 3: O = G01(a) G02(b) G12(c)
        let (a, b, c) = (0.3, -1.1, 2.0);
        let o = givens_orthogonal(&AngleVector::new(vec![a, b, c]), 3).unwrap();
        let rot = |i: usize, j: usize, t: f64| {
            let mut g = RealMatrix::identity(3, 3);
            g[(i, i)] = t.cos();
            g[(j, j)] = t.cos();
            g[(i, j)] = -t.sin();
            g[(j, i)] = t.sin();
            g
        };
        let expected = rot(0, 1, a) * rot(0, 2, b) * rot(1, 2, c);
        assert!(max_abs(&(o - expected)) < 1e-15);
    }

    #[test]
    fn givens_wrong_length() {
        let err = givens_orthogonal(&AngleVector::zeros(2), 3).unwrap_err();
        assert!(matches!(err, Error::Dimension { .. }));
    }

    #[test]
    fn quadrature_of_identity_and_phase() {
        let s = quadrature_symplectic(&ComplexMatrix::identity(3, 3)).unwrap();
        assert_eq!(s, RealMatrix::identity(6, 6));
        let u = ComplexMatrix::from_element(1, 1, Complex64::new(0.0, 1.0));
        let s = quadrature_symplectic(&u).unwrap();
        assert_eq!(s, RealMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
    }

    #[test]
    fn quadrature_rejects_non_unitary() {
        let u = ComplexMatrix::identity(2, 2) * Complex64::new(2.0, 0.0);
        assert!(matches!(
            quadrature_symplectic(&u),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn symplectic_checks() {
        assert_eq!(check_symplectic(&RealMatrix::identity(4, 4)).unwrap(), 0.0);
        let shear = RealMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert_eq!(check_symplectic(&shear).unwrap(), 0.0);
        let squash = RealMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        assert!((check_symplectic(&squash).unwrap() - 3.0).abs() < 1e-15);
        assert!(matches!(
            check_symplectic(&RealMatrix::identity(3, 3)),
            Err(Error::Dimension { .. })
        ));
    }
}
