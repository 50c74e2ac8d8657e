//! Nullifier variances of a four-mode linear cluster with unequal squeezing, computed
//! in closed form and again by propagating the full covariance matrix.
//!
//!     cargo run --example nullifier_noise

use cvnet::noise::{input_covariance, nullifier_variances_from_covariance};
use cvnet::{
    cluster_unitary, covariance_propagate, nullifier_report, quadrature_symplectic, AdjacencyGraph,
    AngleVector, SqueezingProfile,
};

fn main() -> cvnet::Result<()> {
    let chain = AdjacencyGraph::linear_cluster(4)?;
    let prof = SqueezingProfile::new(vec![-7.0, -6.0, -4.0, 0.0])?;

    for theta in [
        AngleVector::zeros(6),
        AngleVector::new(vec![0.3, -1.1, 2.0, 0.5, -0.7, 1.4]),
    ] {
        let report = nullifier_report(&chain, &theta, &prof)?;

        let u = cluster_unitary(&chain, &theta)?;
        let sigma = covariance_propagate(
            &quadrature_symplectic(u.matrix())?,
            &input_covariance(&prof),
        )?;
        let via_cov = nullifier_variances_from_covariance(&chain, &sigma)?;

        println!("theta {:?}", theta.as_slice());
        println!("  shot noise   {:?}", report.shot);
        println!("  variances    {}", fmt(&report.variances));
        println!("  covariance   {}", fmt(&via_cov));
        println!("  normalized   {}", fmt(&report.normalized));
        println!("  f1 {:.4}   f1_alt {:.4}", report.f1, report.f1_alt);
    }
    Ok(())
}

fn fmt(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}
