//! Built-in analytic checks run by `panharmonic validate`.

use std::sync::Arc;

use crate::analysis::{condition_margin_sampled, varadhan_error_with};
use crate::error::Result;
use crate::geometry::{Domain, Point2};
use crate::mesh::triangulate;
use crate::solver::{solve_dirichlet, solve_neumann, Problem, ScalarField};
use crate::special::{
    bessel_i0, bessel_i1, halfplane_solution_eval, log_bessel_i0, neumann_disc_value, DiscSolution,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, passed, detail }
}

fn bessel_checks() -> Result<Vec<Check>> {
    let i0 = bessel_i0(1.0)?;
    let i1 = bessel_i1(1.0)?;
    let r0 = ((i0 - 1.2660658777520084) / 1.2660658777520084).abs();
    let r1 = ((i1 - 0.565159103992485) / 0.565159103992485).abs();
    let mut ordered = true;
    for k in 1..=1000 {
        let z = 0.1 * k as f64;
        ordered &= bessel_i1(z)? < bessel_i0(z)?;
    }
    let log50 = log_bessel_i0(50.0)?;
    Ok(vec![
        check("bessel I0(1), I1(1)", r0 < 1e-11 && r1 < 1e-11, format!("relative errors {r0:.2e}, {r1:.2e}")),
        check("bessel I1 < I0 on (0, 100]", ordered, "1000-point grid".into()),
        check(
            "bessel log I0(50)",
            (log50 - 47.1275755018718).abs() < 1e-10,
            format!("log I0(50) = {log50:.15}"),
        ),
    ])
}

fn disc_checks() -> Result<Vec<Check>> {
    let disc = Domain::unit_disc();
    let mesh = Arc::new(triangulate(&disc, 0.02)?);
    let dirichlet = solve_dirichlet(Arc::clone(&mesh), 1.0)?;
    let centre = dirichlet.nearest_node(Point2::new(0.0, 0.0));
    let exact = DiscSolution::new(1.0, 1.0)?.eval_at(0.0).0;
    let err_d = (dirichlet.values[centre] - exact).abs();

    let neumann = solve_neumann(Arc::clone(&mesh), 1.0)?;
    let exact_centre = neumann_disc_value(1.0, 1.0, 0.0)?;
    let exact_rim = neumann_disc_value(1.0, 1.0, 1.0)?;
    let err_n = (neumann.values[centre] - exact_centre).abs();
    let err_rim = mesh
        .nodes
        .iter()
        .zip(&neumann.values)
        .zip(&mesh.boundary_node)
        .filter(|(_, &b)| b)
        .map(|((_, v), _)| (v - exact_rim).abs())
        .fold(0.0, f64::max);

    let sol = DiscSolution::new(1.0, 1.0)?;
    let rim_margin = sol.margin_at(1.0);
    Ok(vec![
        check("disc Dirichlet centre value", err_d < 2e-3, format!("|error| = {err_d:.3e} (exact {exact:.6})")),
        check("disc Neumann centre value", err_n < 5e-3, format!("|error| = {err_n:.3e} (exact {exact_centre:.6})")),
        check("disc Neumann boundary values", err_rim < 1e-2, format!("max |error| = {err_rim:.3e}")),
        check(
            "disc margin at the rim",
            (rim_margin - 0.553610034103465).abs() < 1e-12,
            format!("margin = {rim_margin:.15}"),
        ),
    ])
}

fn halfplane_checks() -> Result<Vec<Check>> {
    let square = Domain::unit_square();
    let mesh = Arc::new(triangulate(&square, 0.05)?);
    let mut worst_margin: f64 = 0.0;
    let mut worst_varadhan: f64 = 0.0;
    for mu in [1.0, 10.0, 100.0] {
        let c = condition_margin_sampled(&mesh, mu, true, |p| halfplane_solution_eval(mu, p).unwrap_or((0.0, 0.0)));
        worst_margin = worst_margin.max(c.margins.iter().fold(0.0, |a: f64, m| a.max(m.abs())));
        let field = ScalarField::sampled(Arc::clone(&mesh), mu, Problem::Dirichlet, |p| (-mu * p.x2).exp());
        worst_varadhan = worst_varadhan.max(varadhan_error_with(&field, |p| p.x2)?.sup_error);
    }
    Ok(vec![
        check("half-plane margin is zero", worst_margin <= 1e-12, format!("max |margin| = {worst_margin:.2e}")),
        check(
            "half-plane Varadhan identity",
            worst_varadhan <= 1e-14,
            format!("max |error| = {worst_varadhan:.2e}"),
        ),
    ])
}

pub fn run_validation() -> Result<Vec<Check>> {
    let mut checks = bessel_checks()?;
    checks.extend(disc_checks()?);
    checks.extend(halfplane_checks()?);
    Ok(checks)
}
