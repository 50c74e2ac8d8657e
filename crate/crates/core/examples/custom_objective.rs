//! Any `Fn(&[f64]) -> f64` is an objective. Here the worst normalized nullifier of a
//! 4-mode ring is minimized instead of the mean.
//!
//!     cargo run --release --example custom_objective

use cvnet::es::multi_start;
use cvnet::{nullifier_report, AdjacencyGraph, AngleVector, OptimizerConfig, SqueezingProfile};

fn main() -> cvnet::Result<()> {
    let ring = AdjacencyGraph::ring(4)?;
    let prof = SqueezingProfile::new(vec![-9.0, -3.0, -6.0, -1.0])?;
    let worst = |theta: &[f64]| -> f64 {
        nullifier_report(&ring, &AngleVector::new(theta.to_vec()), &prof)
            .map(|r| r.normalized.iter().copied().fold(0.0, f64::max))
            .unwrap_or(f64::INFINITY)
    };

    let dim = AngleVector::dim_for_modes(ring.n());
    let ms = multi_start(&worst, dim, &OptimizerConfig::default().with_seed(5))?;
    let best = ms.best();
    let report = nullifier_report(&ring, &AngleVector::new(best.theta.clone()), &prof)?;
    println!(
        "worst nullifier at theta = 0  {:.4}",
        worst(&vec![0.0; dim])
    );
    println!("worst nullifier optimized     {:.4}", best.fitness);
    println!(
        "normalized variances {:.4?} (mean {:.4})",
        report.normalized, report.f1
    );
    Ok(())
}
