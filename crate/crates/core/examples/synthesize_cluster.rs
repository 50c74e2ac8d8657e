//! Builds the network unitary for a 2x3 grid cluster and checks it.
//!
//!     cargo run --example synthesize_cluster

use cvnet::linalg::{check_symplectic, quadrature_symplectic};
use cvnet::{cluster_unitary, verify_cluster_condition, AdjacencyGraph, AngleVector};

fn main() -> cvnet::Result<()> {
    let grid = AdjacencyGraph::grid(2, 3)?;
    let n = grid.n();
    let theta = AngleVector::new(
        (0..AngleVector::dim_for_modes(n))
            .map(|i| 0.4 * i as f64 - 1.0)
            .collect::<Vec<_>>(),
    );
    let u = cluster_unitary(&grid, &theta)?;

    println!(
        "graph {} ({} modes, {} angles)",
        &grid.hash()[..12],
        n,
        theta.len()
    );
    for row in u.matrix().row_iter() {
        let cells: Vec<String> = row
            .iter()
            .map(|z| format!("{:+.3}{:+.3}i", z.re, z.im))
            .collect();
        println!("  {}", cells.join("  "));
    }
    let s = quadrature_symplectic(u.matrix())?;
    println!("unitarity residual   {:.2e}", u.unitarity_residual());
    println!(
        "|Y - VX|_max         {:.2e}",
        verify_cluster_condition(&u, &grid)?
    );
    println!("symplectic residual  {:.2e}", check_symplectic(&s)?);
    Ok(())
}
