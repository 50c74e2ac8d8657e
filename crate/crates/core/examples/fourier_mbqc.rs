//! Fourier transform on an input mode teleported through a three-mode linear cluster:
//! composes the computation, eliminates the measured modes and reports the excess noise.
//!
//!     cargo run --example fourier_mbqc

use cvnet::fixtures;
use cvnet::{
    compose_computation, eliminate_and_project, extra_noise_variances, nullifier_decomposition,
    AdjacencyGraph, MeasurementPlan, SqueezingProfile,
};

fn main() -> cvnet::Result<()> {
    let chain = AdjacencyGraph::linear_cluster(3)?;
    let plan = MeasurementPlan::fourier();
    let cluster = fixtures::fourier_cluster();

    let comp = compose_computation(&cluster, &plan)?;
    let out = eliminate_and_project(&comp, &plan)?;
    println!("gate           {:?}", out.gate);
    println!("noise on x     {:?}", out.noise_x);
    println!("noise on p     {:?}", out.noise_p);
    println!("x shift        {:?}", out.displacement_x);
    println!("p shift        {:?}", out.displacement_p);

    let dec = nullifier_decomposition(&out, &cluster, &chain)?;
    println!(
        "as nullifiers  x: {:?}  p: {:?}",
        rounded(&dec.c_x),
        rounded(&dec.c_p)
    );

    for (label, prof) in [
        ("vacuum", SqueezingProfile::vacuum(3)),
        (
            "-7/-6/-4 dB",
            SqueezingProfile::new(vec![-7.0, -6.0, -4.0])?,
        ),
    ] {
        let e = extra_noise_variances(&out, &prof)?;
        println!(
            "{label:<12} var_x {:.4}  var_p {:.4}  f2 {:.4}",
            e.var_x, e.var_p, e.f2
        );
    }
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e6).round() / 1e6 + 0.0).collect()
}
