//! Fitting the constant in `v <= C exp(-mu (1 - rho) d)`.

use std::sync::Arc;

use panharmonic::analysis::prop21_fit;
use panharmonic::geometry::Domain;
use panharmonic::mesh::triangulate;
use panharmonic::solver::{solve_dirichlet, Problem, ScalarField};
use panharmonic::special::DiscSolution;

fn main() -> panharmonic::Result<()> {
    let disc = Domain::unit_disc();
    let mesh = Arc::new(triangulate(&disc, 0.02)?);
    let mus = [4.0, 8.0, 16.0, 32.0];
    let fields: Vec<ScalarField> = mus
        .iter()
        .map(|&mu| {
            let sol = DiscSolution::new(1.0, mu).unwrap();
            ScalarField::sampled(Arc::clone(&mesh), mu, Problem::Dirichlet, |p| sol.log_value_at(p.norm()).exp())
        })
        .collect();
    for rho in [0.1, 0.25, 0.4] {
        let fit = prop21_fit(&fields.iter().collect::<Vec<_>>(), &disc, rho)?;
        let maxima: Vec<String> = fit.per_mu.iter().map(|e| format!("{:.4}", e.max_ratio)).collect();
        println!("disc (exact), rho {rho}: C = {:.6}  per mu [{}]", fit.c_rho, maxima.join(", "));
    }

    let l = Domain::l_shape();
    let mesh = Arc::new(triangulate(&l, 0.02)?);
    let fields = [5.0, 10.0, 20.0].map(|mu| solve_dirichlet(Arc::clone(&mesh), mu).unwrap());
    let fit = prop21_fit(&fields.iter().collect::<Vec<_>>(), &l, 0.25)?;
    println!("L-shape (finite elements), rho 0.25: C = {:.6}, lower bound holds: {}", fit.c_rho, fit.lower_bound_holds);
    Ok(())
}
