//! `-ln(v) / mu` approaching the distance to the boundary.

use std::sync::Arc;

use panharmonic::analysis::sweep::{base_mesh, resolve_mesh};
use panharmonic::analysis::{varadhan_error, TargetH};
use panharmonic::geometry::Domain;
use panharmonic::solver::solve_dirichlet;
use panharmonic::special::DiscSolution;

fn main() -> panharmonic::Result<()> {
    println!("unit disc, closed form (worst point is the centre)");
    for mu in [25.0, 50.0, 100.0, 200.0, 400.0] {
        let sol = DiscSolution::new(1.0, mu)?;
        let error = (-sol.log_value_at(0.0) / mu - 1.0).abs();
        let predicted = (2.0 * std::f64::consts::PI * mu).ln() / (2.0 * mu);
        println!("  mu {mu:>5}: sup error {error:.5}  log(2 pi mu)/(2 mu) = {predicted:.5}");
    }

    for (name, domain) in [("unit square", Domain::unit_square()), ("L-shape", Domain::l_shape())] {
        println!("{name}, finite elements");
        let (base, _) = base_mesh(&domain, TargetH::Auto, 40.0)?;
        let base = Arc::new(base);
        for mu in [5.0, 10.0, 20.0, 40.0] {
            let field = solve_dirichlet(resolve_mesh(&base, &domain, mu)?, mu)?;
            let r = varadhan_error(&field, &domain)?;
            println!(
                "  mu {mu:>4}: sup error {:.5} at ({:.3}, {:.3})",
                r.sup_error, r.error_location.x1, r.error_location.x2
            );
        }
    }
    Ok(())
}
