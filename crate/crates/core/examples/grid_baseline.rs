//! Exhaustive grid search as a reference for the evolution strategy on the
//! three-angle excess-noise problem.
//!
//!     cargo run --release --example grid_baseline -- 0.05

use std::time::Instant;

use cvnet::es::multi_start;
use cvnet::{
    exhaustive_baseline, AdjacencyGraph, MbqcObjective, MeasurementPlan, OptimizerConfig,
    SqueezingProfile,
};

fn main() -> cvnet::Result<()> {
    let resolution: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("resolution is a number"))
        .unwrap_or(0.1);
    let obj = MbqcObjective::new(
        &AdjacencyGraph::linear_cluster(3)?,
        &MeasurementPlan::fourier(),
        &SqueezingProfile::new(vec![-7.0, -6.0, -4.0])?,
    )?;

    let t = Instant::now();
    let (theta, f) = exhaustive_baseline(&obj, 3, resolution)?;
    println!(
        "grid {resolution}: f2 {f:.5} at {theta:.3?} ({:.2?})",
        t.elapsed()
    );

    let t = Instant::now();
    let ms = multi_start(&obj, 3, &OptimizerConfig::default())?;
    println!(
        "es:        f2 {:.5} at {:.3?} ({:.2?})",
        ms.best().fitness,
        ms.best().theta,
        t.elapsed()
    );
    Ok(())
}
