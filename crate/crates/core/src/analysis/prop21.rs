use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};
use crate::solver::{Problem, ScalarField};

/// Slack allowed when re-checking the logarithmic lower bound.
pub const LOWER_BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop21Entry {
    pub mu: f64,
    /// `max v exp(mu (1 - rho) d)` for this field alone.
    pub max_ratio: f64,
    pub location: Point2,
}

/// Smallest constant `C` with `v <= C exp(-mu (1 - rho) d)` on the supplied
/// data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop21Fit {
    pub rho: f64,
    pub c_rho: f64,
    pub per_mu: Vec<Prop21Entry>,
    /// `-ln(v)/mu >= -ln(C)/mu + (1 - rho) d` held at every node.
    pub lower_bound_holds: bool,
    /// Smallest value of left side minus right side over all nodes.
    pub lower_bound_slack: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::OutOfRange(format!("rho must lie in (0, 1/2), got {rho}")));
    }
    Ok(())
}

pub fn prop21_fit(fields: &[&ScalarField], domain: &Domain, rho: f64) -> Result<Prop21Fit> {
    check_rho(rho)?;
    if fields.is_empty() {
        return Err(Error::InvalidArgument("no fields supplied".into()));
    }
    let mut per_mu = Vec::with_capacity(fields.len());
    let mut distances = Vec::with_capacity(fields.len());
    let mut log_c = f64::NEG_INFINITY;
    for field in fields {
        if field.problem != Problem::Dirichlet {
            return Err(Error::InvalidArgument("the constant fit needs Dirichlet fields".into()));
        }
        let d: Vec<f64> = field.mesh.nodes.iter().map(|&p| domain.boundary_distance(p)).collect();
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, (&v, &di)) in field.values.iter().zip(&d).enumerate() {
            if !(v > 0.0) {
                return Err(Error::NonPositiveValue { node: i, value: v });
            }
            let log_ratio = v.ln() + field.mu * (1.0 - rho) * di;
            if log_ratio > best.0 {
                best = (log_ratio, i);
            }
        }
        log_c = log_c.max(best.0);
        per_mu.push(Prop21Entry { mu: field.mu, max_ratio: best.0.exp(), location: field.mesh.nodes[best.1] });
        distances.push(d);
    }
    let mut slack = f64::INFINITY;
    for (field, d) in fields.iter().zip(&distances) {
        let mu = field.mu;
        for (&v, &di) in field.values.iter().zip(d) {
            let lhs = -v.ln() / mu;
            let rhs = -log_c / mu + (1.0 - rho) * di;
            slack = slack.min(lhs - rhs);
        }
    }
    Ok(Prop21Fit {
        rho,
        c_rho: log_c.exp(),
        per_mu,
        lower_bound_holds: slack >= -LOWER_BOUND_TOL,
        lower_bound_slack: slack,
    })
}

impl Prop21Fit {
    /// Joins fits over disjoint sets of fields with the same `rho`. A larger
    /// constant only weakens the lower bound, so it holds for the union
    /// whenever it held for every part.
    pub fn combine(parts: Vec<Prop21Fit>) -> Result<Prop21Fit> {
        let first = parts.first().ok_or_else(|| Error::InvalidArgument("no fits supplied".into()))?;
        let rho = first.rho;
        let mut out = Prop21Fit {
            rho,
            c_rho: f64::NEG_INFINITY,
            per_mu: Vec::new(),
            lower_bound_holds: true,
            lower_bound_slack: f64::INFINITY,
        };
        for part in parts {
            if part.rho != rho {
                return Err(Error::InvalidArgument("fits use different rho".into()));
            }
            out.c_rho = out.c_rho.max(part.c_rho);
            out.lower_bound_holds &= part.lower_bound_holds;
            out.lower_bound_slack = out.lower_bound_slack.min(part.lower_bound_slack);
            out.per_mu.extend(part.per_mu);
        }
        Ok(out)
    }
}
