use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};
use crate::solver::ScalarField;

/// Sup-norm distance between `-ln(v) / mu` and the true distance function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VaradhanResult {
    pub mu: f64,
    pub sup_error: f64,
    pub error_location: Point2,
    pub resolution_ok: bool,
}

/// Per-node `-ln(v) / mu`.
///
/// Nodes where `v == 1` (in particular Dirichlet boundary nodes) map to
/// `+0.0` exactly.
pub fn varadhan_estimate(field: &ScalarField) -> Result<Vec<f64>> {
    field
        .values
        .iter()
        .enumerate()
        .map(|(node, &v)| {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveValue { node, value: v });
            }
            if v == 1.0 {
                Ok(0.0)
            } else {
                Ok(-v.ln() / field.mu)
            }
        })
        .collect()
}

pub fn varadhan_error(field: &ScalarField, domain: &Domain) -> Result<VaradhanResult> {
    varadhan_error_with(field, |p| domain.boundary_distance(p))
}

/// As [`varadhan_error`] with the exact distance supplied by the caller
/// (half-planes and other unbounded model problems).
pub fn varadhan_error_with(field: &ScalarField, distance: impl Fn(Point2) -> f64) -> Result<VaradhanResult> {
    let estimate = varadhan_estimate(field)?;
    let mesh = &field.mesh;
    let mut worst: Option<(f64, usize)> = None;
    for (i, (&e, p)) in estimate.iter().zip(&mesh.nodes).enumerate() {
        if mesh.boundary_node[i] {
            continue;
        }
        let err = (e - distance(*p)).abs();
        if worst.is_none_or(|(w, _)| err > w) {
            worst = Some((err, i));
        }
    }
    let (sup_error, node) =
        worst.ok_or_else(|| Error::InvalidArgument("mesh has no interior nodes".into()))?;
    Ok(VaradhanResult {
        mu: field.mu,
        sup_error,
        error_location: mesh.nodes[node],
        resolution_ok: field.resolution_ok,
    })
}
