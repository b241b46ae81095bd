use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::mesh::Mesh;
use crate::solver::{triangle_gradient, GradientField, ScalarField};

/// How the value of `v` paired with the constant gradient of a triangle is
/// chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Collocation {
    /// Mean of the three vertex values (the P1 value at the centroid).
    #[default]
    VertexMean,
    /// Smallest vertex value; never accepts a triangle the mean rejects.
    MinVertex,
    /// `vbar * (mu - |grad ln v|)` with the P1 interpolant of `ln v`.
    /// Exact for `exp(-mu x2)` on any mesh.
    LogGradient,
}

/// Per-triangle values of `mu v - |grad v|` and their minimum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub mu: f64,
    pub collocation: Collocation,
    #[serde(skip)]
    pub margins: Vec<f64>,
    pub min_margin: f64,
    pub argmin_triangle: usize,
    pub argmin_centroid: Point2,
    pub resolution_ok: bool,
}

impl ConditionResult {
    fn from_margins(mesh: &Mesh, mu: f64, collocation: Collocation, margins: Vec<f64>, resolution_ok: bool) -> Self {
        let (argmin_triangle, min_margin) = lowest_index_min(&margins);
        Self {
            mu,
            collocation,
            argmin_centroid: mesh.centroid(argmin_triangle),
            margins,
            min_margin,
            argmin_triangle,
            resolution_ok,
        }
    }

    /// Number of triangles with a margin below `-tol`.
    pub fn violations(&self, tol: f64) -> usize {
        self.margins.iter().filter(|&&m| m < -tol).count()
    }
}

fn lowest_index_min(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, &m) in values.iter().enumerate() {
        if m < best.1 {
            best = (i, m);
        }
    }
    best
}

/// `mu v - |g|` for a single value/gradient pair.
pub fn pointwise_margin(mu: f64, v: f64, grad_norm: f64) -> f64 {
    mu * v - grad_norm
}

/// `-mu^2 + |g|^2 / v^2`, the sign-reversed logarithmic Laplacian; it is
/// nonpositive exactly when the margin is nonnegative.
pub fn log_laplacian_indicator(mu: f64, v: f64, grad_norm: f64) -> f64 {
    -mu * mu + (grad_norm * grad_norm) / (v * v)
}

pub fn condition_margin(field: &ScalarField, grads: &GradientField) -> Result<ConditionResult> {
    condition_margin_with(field, grads, Collocation::VertexMean)
}

pub fn condition_margin_with(
    field: &ScalarField,
    grads: &GradientField,
    collocation: Collocation,
) -> Result<ConditionResult> {
    if !Arc::ptr_eq(&field.mesh, &grads.mesh) && *field.mesh != *grads.mesh {
        return Err(Error::MeshMismatch);
    }
    let mesh = &field.mesh;
    let mu = field.mu;
    let logs = match collocation {
        Collocation::LogGradient => Some(
            field
                .values
                .iter()
                .enumerate()
                .map(|(node, &v)| if v > 0.0 { Ok(v.ln()) } else { Err(Error::NonPositiveValue { node, value: v }) })
                .collect::<Result<Vec<f64>>>()?,
        ),
        _ => None,
    };
    let margins = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let [a, b, c] = mesh.triangles[t];
            let (va, vb, vc) = (field.values[a], field.values[b], field.values[c]);
            let mean = (va + vb + vc) / 3.0;
            match collocation {
                Collocation::VertexMean => pointwise_margin(mu, mean, grads.gradients[t].norm()),
                Collocation::MinVertex => pointwise_margin(mu, va.min(vb).min(vc), grads.gradients[t].norm()),
                Collocation::LogGradient => {
                    let g = triangle_gradient(mesh, t, logs.as_deref().unwrap_or_default());
                    mean * (mu - g.norm())
                }
            }
        })
        .collect();
    Ok(ConditionResult::from_margins(mesh, mu, collocation, margins, field.resolution_ok))
}

/// Margins from exact values and gradient norms evaluated at each triangle
/// centroid.
pub fn condition_margin_sampled(
    mesh: &Mesh,
    mu: f64,
    resolution_ok: bool,
    exact: impl Fn(Point2) -> (f64, f64) + Sync,
) -> ConditionResult {
    let margins = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let (v, g) = exact(mesh.centroid(t));
            pointwise_margin(mu, v, g)
        })
        .collect();
    ConditionResult::from_margins(mesh, mu, Collocation::VertexMean, margins, resolution_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::mesh::triangulate;
    use crate::solver::{gradient_field, solve_dirichlet, Problem};
    use crate::special::{halfplane_solution_eval, DiscSolution};

    #[test]
    fn unit_field_has_margin_mu() {
        let mesh = Arc::new(triangulate(&Domain::l_shape(), 0.2).unwrap());
        let field = ScalarField::sampled(mesh, 1.0, Problem::Dirichlet, |_| 1.0);
        let r = condition_margin(&field, &gradient_field(&field)).unwrap();
        assert!(r.margins.iter().all(|&m| m == 1.0));
        assert_eq!(r.argmin_triangle, 0);
    }

    #[test]
    fn halfplane_samples_give_zero_margin() {
        let square = Domain::unit_square();
        let mesh = triangulate(&square, 0.1).unwrap();
        for mu in [1.0, 10.0, 100.0] {
            let r = condition_margin_sampled(&mesh, mu, true, |p| halfplane_solution_eval(mu, p).unwrap());
            assert!(r.margins.iter().all(|m| m.abs() <= 1e-12));
        }
    }

    #[test]
    fn log_gradient_is_exact_for_halfplane() {
        let mesh = Arc::new(triangulate(&Domain::unit_square(), 0.05).unwrap());
        let mu = 10.0;
        let field = ScalarField::sampled(mesh, mu, Problem::Dirichlet, |p| (-mu * p.x2).exp());
        let grads = gradient_field(&field);
        let log = condition_margin_with(&field, &grads, Collocation::LogGradient).unwrap();
        assert!(log.min_margin.abs() < 1e-12);
        let mean = condition_margin(&field, &grads).unwrap();
        assert!(mean.min_margin < -0.1);
    }

    #[test]
    fn disc_margin_is_smallest_at_rim_for_mu_one() {
        let mesh = Arc::new(triangulate(&Domain::unit_disc(), 0.02).unwrap());
        let sol = DiscSolution::new(1.0, 1.0).unwrap();
        let r = condition_margin_sampled(&mesh, 1.0, true, |p| sol.eval_at(p.norm()));
        assert!(r.argmin_centroid.norm() > 0.98);
        assert!((r.min_margin - 0.553610034103465).abs() < 2e-3);
    }

    #[test]
    fn min_vertex_is_conservative() {
        let mesh = Arc::new(triangulate(&Domain::l_shape(), 0.05).unwrap());
        let field = solve_dirichlet(mesh, 5.0).unwrap();
        let g = gradient_field(&field);
        let mean = condition_margin(&field, &g).unwrap();
        let low = condition_margin_with(&field, &g, Collocation::MinVertex).unwrap();
        for (a, b) in mean.margins.iter().zip(&low.margins) {
            assert!(b <= a);
        }
    }

    #[test]
    fn mismatched_meshes_are_rejected() {
        let a = Arc::new(triangulate(&Domain::unit_square(), 0.2).unwrap());
        let b = Arc::new(triangulate(&Domain::unit_square(), 0.1).unwrap());
        let fa = ScalarField::sampled(a, 1.0, Problem::Dirichlet, |_| 1.0);
        let fb = ScalarField::sampled(b, 1.0, Problem::Dirichlet, |_| 1.0);
        assert!(matches!(condition_margin(&fa, &gradient_field(&fb)), Err(Error::MeshMismatch)));
    }
}
