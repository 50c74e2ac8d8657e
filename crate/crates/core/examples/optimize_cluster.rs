//! Searches the network angles that minimize the mean normalized nullifier variance of
//! a four-mode linear cluster. Pass a path to also write the per-generation trace.
//!
//!     cargo run --release --example optimize_cluster -- trace.csv

use cvnet::es::multi_start;
use cvnet::{
    AdjacencyGraph, ClusterObjective, NullifierFitness, OptimizerConfig, SqueezingProfile,
};

fn main() -> cvnet::Result<()> {
    let chain = AdjacencyGraph::linear_cluster(4)?;
    let prof = SqueezingProfile::new(vec![-7.0, -6.0, -4.0, 0.0])?;
    let obj = ClusterObjective::new(&chain, &prof, NullifierFitness::Normalized)?;

    let start = obj.report(&[0.0; 6]);
    let cfg = OptimizerConfig::default().with_seed(2024);
    let ms = multi_start(&obj, obj.dim(), &cfg)?;
    let best = ms.best();
    let end = obj.report(&best.theta);

    println!(
        "f1 at theta = 0   {:.4}  {:?}",
        start.f1,
        rounded(&start.normalized)
    );
    println!(
        "f1 optimized      {:.4}  {:?}",
        end.f1,
        rounded(&end.normalized)
    );
    println!(
        "best of {} starts: start {}, stop {:?}, {} generations",
        cfg.starts,
        ms.best_start,
        best.stop,
        best.trace.records.len() - 1
    );
    println!("theta {:?}", rounded(&best.theta));

    if let Some(path) = std::env::args().nth(1) {
        best.trace.write_csv(
            std::fs::File::create(&path).map_err(|e| cvnet::Error::Validation(e.to_string()))?,
        )?;
        println!("trace written to {path}");
    }
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}
