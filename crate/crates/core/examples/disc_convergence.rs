//! Nodal error of the finite-element solution on the unit disc against
//! `I0(mu |x|) / I0(mu)`, under uniform refinement.

use std::sync::Arc;

use panharmonic::geometry::Domain;
use panharmonic::mesh::{refine_uniform, triangulate};
use panharmonic::solver::solve_dirichlet;
use panharmonic::special::DiscSolution;

fn main() -> panharmonic::Result<()> {
    let disc = Domain::unit_disc();
    for mu in [2.0, 8.0] {
        let exact = DiscSolution::new(1.0, mu)?;
        let mut mesh = triangulate(&disc, 0.16)?;
        let mut previous = None;
        println!("mu = {mu}");
        for _ in 0..4 {
            let shared = Arc::new(mesh.clone());
            let field = solve_dirichlet(Arc::clone(&shared), mu)?;
            let error = shared
                .nodes
                .iter()
                .zip(&field.values)
                .map(|(p, v)| (v - exact.eval_at(p.norm().min(1.0)).0).abs())
                .fold(0.0, f64::max);
            let ratio = previous.map(|p: f64| format!("{:.3}", p / error)).unwrap_or_else(|| "-".into());
            println!(
                "  h_max {:.4}  dofs {:>6}  cg {:>3}  max error {error:.3e}  ratio {ratio}",
                shared.h_max(),
                field.stats.dofs,
                field.stats.cg_iterations
            );
            previous = Some(error);
            mesh = refine_uniform(&mesh, &disc)?;
        }
    }
    Ok(())
}
