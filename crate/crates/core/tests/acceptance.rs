//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any
//! criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use cvnet::es::{multi_start, optimize, OptimizerConfig};
use cvnet::fixtures::{self, FIXTURE_TOLERANCE};
use cvnet::mbqc::{compose_computation, mbqc_noise};
use cvnet::noise::{input_covariance, nullifier_variances_from_covariance};
use cvnet::{
    cluster_unitary, covariance_propagate, eliminate_and_project, exhaustive_baseline,
    extra_noise_variances, nullifier_decomposition, nullifier_report, nullifier_variances,
    quadrature_symplectic, verify_cluster_condition, AdjacencyGraph, AngleVector, ClusterObjective,
    MbqcObjective, MeasurementPlan, NullifierFitness, SqueezingProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn within_time(start: Instant, limit: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    check(
        t < limit,
        format!("{detail}, {:.2}s", t.as_secs_f64()),
        format!(
            "{detail}, took {:.2}s (limit {}s)",
            t.as_secs_f64(),
            limit.as_secs()
        ),
    )
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> AdjacencyGraph {
    let n = rng.random_range(2..=max_n);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.5) {
                edges.push((i, j, rng.random_range(-2.0..2.0)));
            }
        }
    }
    AdjacencyGraph::from_edges(n, &edges).unwrap()
}

fn random_angles(rng: &mut ChaCha8Rng, n: usize) -> AngleVector {
    AngleVector::new(
        (0..AngleVector::dim_for_modes(n))
            .map(|_| rng.random_range(-PI..PI))
            .collect::<Vec<_>>(),
    )
}

fn chain(n: usize) -> AdjacencyGraph {
    AdjacencyGraph::linear_cluster(n).unwrap()
}

fn table_profile() -> SqueezingProfile {
    SqueezingProfile::new(vec![-7.0, -6.0, -4.0]).unwrap()
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn c1_cluster_condition() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut worst_cluster, mut worst_unitary) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 8);
        let theta = random_angles(&mut rng, g.n());
        let u = cluster_unitary(&g, &theta).map_err(|e| e.to_string())?;
        worst_cluster = worst_cluster.max(verify_cluster_condition(&u, &g).unwrap());
        worst_unitary = worst_unitary.max(u.unitarity_residual());
    }
    let detail =
        format!("max |Y-VX| {worst_cluster:.1e}, max unitarity residual {worst_unitary:.1e}");
    check(
        worst_cluster < 1e-10 && worst_unitary < 1e-10,
        detail.clone(),
        detail,
    )?;
    within_time(
        start,
        Duration::from_secs(5),
        format!("200 instances, {worst_cluster:.1e}/{worst_unitary:.1e}"),
    )
}

fn c2_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let g = random_graph(&mut rng, 6);
        let theta = random_angles(&mut rng, g.n());
        let db: Vec<f64> = (0..g.n()).map(|_| rng.random_range(-15.0..3.0)).collect();
        let prof = SqueezingProfile::new(db).unwrap();
        let closed = nullifier_variances(&g, &theta, &prof).unwrap();
        let u = cluster_unitary(&g, &theta).unwrap();
        let s = quadrature_symplectic(u.matrix()).unwrap();
        let sigma = covariance_propagate(&s, &input_covariance(&prof)).unwrap();
        let cov = nullifier_variances_from_covariance(&g, &sigma).unwrap();
        worst = worst.max(max_dev(&closed, &cov));
    }
    check(
        worst < 1e-10,
        String::new(),
        format!("max deviation {worst:.1e}"),
    )?;
    within_time(
        start,
        Duration::from_secs(5),
        format!("100 instances, max deviation {worst:.1e}"),
    )
}

fn c3_uniform_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for n in [3, 4, 6] {
        let g = random_graph(&mut rng, n);
        let prof = SqueezingProfile::uniform(g.n(), -6.0).unwrap();
        let reference = nullifier_variances(
            &g,
            &AngleVector::zeros(AngleVector::dim_for_modes(g.n())),
            &prof,
        )
        .unwrap();
        for _ in 0..50 {
            let theta = random_angles(&mut rng, g.n());
            let vars = nullifier_variances(&g, &theta, &prof).unwrap();
            worst = worst.max(max_dev(&vars, &reference));
        }
    }
    let detail = format!("max spread over 50 angle draws {worst:.1e}");
    check(worst < 1e-10, detail.clone(), detail)
}

fn c4_shot_noise() -> Outcome {
    let g = chain(3);
    let (_, noise) = mbqc_noise(
        &g,
        &AngleVector::zeros(3),
        &MeasurementPlan::fourier(),
        &SqueezingProfile::vacuum(3),
    )
    .map_err(|e| e.to_string())?;
    let dev = (noise.var_x - 3.0)
        .abs()
        .max((noise.var_p - 2.0).abs())
        .max((noise.f2 - 5.0).abs());
    let detail = format!(
        "({:.12}, {:.12}) f2 {:.12}",
        noise.var_x, noise.var_p, noise.f2
    );
    check(dev < 1e-10, detail.clone(), detail)
}

fn c5_fixture_baseline() -> Outcome {
    let out = eliminate_and_project(&fixtures::fourier_comp(), &MeasurementPlan::fourier())
        .map_err(|e| e.to_string())?;
    let noise = extra_noise_variances(&out, &table_profile()).unwrap();
    let detail = format!(
        "({:.4}, {:.4}) f2 {:.4}",
        noise.var_x, noise.var_p, noise.f2
    );
    let ok = (noise.var_x - 1.194).abs() <= 0.01
        && (noise.var_p - 0.477).abs() <= 0.01
        && (noise.f2 - 1.671).abs() <= 0.01;
    check(ok, detail.clone(), detail)
}

fn c6_optimized_f2() -> Outcome {
    let start = Instant::now();
    let obj = MbqcObjective::new(&chain(3), &MeasurementPlan::fourier(), &table_profile())
        .map_err(|e| e.to_string())?;
    let cfg = OptimizerConfig::default();
    let ms = multi_start(&obj, 3, &cfg).map_err(|e| e.to_string())?;
    let best = ms.best();
    let (_, noise) = obj.evaluate(&best.theta).unwrap();
    let detail = format!(
        "f2 {:.4} split ({:.4}, {:.4}) over {} starts",
        best.fitness, noise.var_x, noise.var_p, cfg.starts
    );
    let ok = best.fitness <= 1.11
        && (noise.var_x - 0.60).abs() <= 0.02
        && (noise.var_p - 0.50).abs() <= 0.02;
    check(ok, detail.clone(), detail.clone())?;
    within_time(start, Duration::from_secs(60), detail)
}

fn c7_optimized_f1() -> Outcome {
    let start = Instant::now();
    let g = chain(4);
    let prof = SqueezingProfile::new(vec![-7.0, -6.0, -4.0, 0.0]).unwrap();
    let obj = ClusterObjective::new(&g, &prof, NullifierFitness::Normalized)
        .map_err(|e| e.to_string())?;
    let cfg = OptimizerConfig::default();
    let ms = multi_start(&obj, 6, &cfg).map_err(|e| e.to_string())?;
    let best = ms.best();
    let report = obj.report(&best.theta);
    let detail = format!(
        "f1 {:.4}, normalized {:.3?}",
        best.fitness, report.normalized
    );
    check(best.fitness <= 0.37, detail.clone(), detail.clone())?;
    within_time(start, Duration::from_secs(120), detail)
}

fn c8_vacuum_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for g in [
        chain(4),
        chain(3),
        AdjacencyGraph::grid(2, 3).unwrap(),
        random_graph(&mut rng, 6),
    ] {
        for _ in 0..10 {
            let theta = random_angles(&mut rng, g.n());
            let r = nullifier_report(&g, &theta, &SqueezingProfile::vacuum(g.n())).unwrap();
            worst = worst.max((r.f1 - 1.0).abs());
        }
    }
    let detail = format!("max |f1 - 1| {worst:.1e} (baseline table row excluded)");
    check(worst < 1e-12, detail.clone(), detail)
}

fn c9_fixture_elimination() -> Outcome {
    let composed =
        compose_computation(&fixtures::fourier_cluster(), &MeasurementPlan::fourier()).unwrap();
    let comp_dev = (composed - fixtures::fourier_comp())
        .map(|z| z.norm())
        .max();
    let out = eliminate_and_project(&fixtures::fourier_comp(), &MeasurementPlan::fourier())
        .map_err(|e| e.to_string())?;
    let s3 = 3f64.sqrt();
    let devs = [
        max_dev(
            &[
                out.gate[0][0],
                out.gate[0][1],
                out.gate[1][0],
                out.gate[1][1],
            ],
            &[0.0, -1.0, 1.0, 0.0],
        ),
        max_dev(&out.noise_x, &[0.0, 0.0, s3]),
        max_dev(&out.noise_p, &[-1.0 / SQRT_2, 3.0 / 6f64.sqrt(), 0.0]),
        max_dev(&out.displacement_x, &[0.0, -SQRT_2, 1.0]),
        max_dev(&out.displacement_p, &[-SQRT_2, 0.0, 0.0]),
    ];
    let worst = devs.iter().copied().fold(comp_dev, f64::max);
    let detail = format!("max deviation {worst:.1e} (composition {comp_dev:.1e})");
    check(worst < FIXTURE_TOLERANCE, detail.clone(), detail)
}

fn c10_decomposition() -> Outcome {
    let out = eliminate_and_project(&fixtures::fourier_comp(), &MeasurementPlan::fourier())
        .map_err(|e| e.to_string())?;
    let d = nullifier_decomposition(&out, &fixtures::fourier_cluster(), &chain(3)).unwrap();
    let worst = max_dev(&d.c_x, &[0.0, -1.0, 0.0]).max(max_dev(&d.c_p, &[-1.0, 0.0, 1.0]));
    let detail = format!(
        "c_x {:.3?}, c_p {:.3?}, max deviation {worst:.1e}",
        d.c_x, d.c_p
    );
    check(worst < FIXTURE_TOLERANCE, detail.clone(), detail)
}

fn c11_gate_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = chain(3);
    let plan = MeasurementPlan::fourier();
    let prof = table_profile();
    let mut worst = 0.0f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..100 {
        let theta = random_angles(&mut rng, 3);
        let (out, noise) = mbqc_noise(&g, &theta, &plan, &prof).map_err(|e| e.to_string())?;
        let gate = [
            out.gate[0][0],
            out.gate[0][1],
            out.gate[1][0],
            out.gate[1][1],
        ];
        worst = worst.max(max_dev(&gate, &[0.0, -1.0, 1.0, 0.0]));
        lo = lo.min(noise.f2);
        hi = hi.max(noise.f2);
    }
    let detail = format!("gate deviation {worst:.1e}, f2 range [{lo:.3}, {hi:.3}]");
    check(worst < 1e-10 && hi - lo > 1e-3, detail.clone(), detail)
}

fn c12_determinism_and_grid() -> Outcome {
    let obj = MbqcObjective::new(&chain(3), &MeasurementPlan::fourier(), &table_profile())
        .map_err(|e| e.to_string())?;
    let cfg = OptimizerConfig::default().with_seed(12);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    for run in 0..2 {
        let res = optimize(&obj, 3, &cfg).map_err(|e| e.to_string())?;
        let path = dir.path().join(format!("trace{run}.csv"));
        res.trace
            .write_csv(std::fs::File::create(&path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    check(
        bytes[0] == bytes[1],
        String::new(),
        "traces differ for identical seeds".into(),
    )?;

    let es = multi_start(&obj, 3, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    let (_, grid) = exhaustive_baseline(&obj, 3, 0.05).map_err(|e| e.to_string())?;
    let gap = (es.best().fitness - grid).abs();
    let detail = format!(
        "traces identical ({} bytes), ES {:.4} vs grid {:.4}",
        bytes[0].len(),
        es.best().fitness,
        grid
    );
    check(gap <= 0.01, detail.clone(), detail)
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("cluster condition on random networks", c1_cluster_condition),
        (
            "closed form vs covariance propagation",
            c2_oracle_equivalence,
        ),
        ("uniform squeezing angle invariance", c3_uniform_invariance),
        ("Fourier plan vacuum excess noise", c4_shot_noise),
        ("fixed Fourier cluster excess noise", c5_fixture_baseline),
        ("optimized excess noise", c6_optimized_f2),
        ("optimized four-mode nullifiers", c7_optimized_f1),
        ("vacuum normalization", c8_vacuum_normalization),
        ("Fourier elimination regression", c9_fixture_elimination),
        ("nullifier decomposition", c10_decomposition),
        ("gate angle invariance", c11_gate_invariance),
        ("determinism and grid agreement", c12_determinism_and_grid),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(f) {
            Ok(Ok(detail)) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Ok(Err(detail)) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: panicked", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
