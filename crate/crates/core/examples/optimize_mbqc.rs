//! Minimizes the excess noise of the three-mode Fourier computation over the network
//! angles. The gate stays fixed while the noise split moves.
//!
//!     cargo run --release --example optimize_mbqc

use cvnet::es::multi_start;
use cvnet::{AdjacencyGraph, MbqcObjective, MeasurementPlan, OptimizerConfig, SqueezingProfile};

fn main() -> cvnet::Result<()> {
    let chain = AdjacencyGraph::linear_cluster(3)?;
    let prof = SqueezingProfile::new(vec![-7.0, -6.0, -4.0])?;
    let obj = MbqcObjective::new(&chain, &MeasurementPlan::fourier(), &prof)?;

    let ms = multi_start(&obj, obj.dim(), &OptimizerConfig::default())?;
    for (i, run) in ms.runs.iter().enumerate() {
        println!("start {i}: f2 {:.6} ({:?})", run.fitness, run.stop);
    }
    let best = ms.best();
    let (out, noise) = obj.evaluate(&best.theta)?;
    println!("theta  {:?}", best.theta);
    println!("gate   {:?}", out.gate);
    println!("noise  x {:?}  p {:?}", out.noise_x, out.noise_p);
    println!(
        "var_x {:.4}  var_p {:.4}  f2 {:.4}",
        noise.var_x, noise.var_p, noise.f2
    );
    Ok(())
}
