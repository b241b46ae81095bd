use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::condition::{condition_margin_with, Collocation, ConditionResult};
use super::prop21::{prop21_fit, Prop21Fit};
use super::varadhan::{varadhan_error, VaradhanResult};
use crate::error::{Error, Result};
use crate::geometry::Domain;
use crate::mesh::{refine_uniform, triangulate, Mesh};
use crate::solver::{gradient_field, solve_dirichlet, solve_neumann, SolveStats, RESOLUTION_LIMIT};

/// Margins down to `-MARGIN_REL_TOL * mu * max v` count as nonnegative.
pub const MARGIN_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "CONDITION_HOLDS")]
    ConditionHolds,
    #[serde(rename = "CONDITION_FAILS")]
    ConditionFails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConditionHolds => "CONDITION_HOLDS",
            Verdict::ConditionFails => "CONDITION_FAILS",
        })
    }
}

/// Mesh size request: a number, or `auto` for `0.5 / mu_max`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TargetH {
    #[default]
    Auto,
    Fixed(f64),
}

impl FromStr for TargetH {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(TargetH::Auto);
        }
        match s.parse::<f64>() {
            Ok(h) if h > 0.0 && h.is_finite() => Ok(TargetH::Fixed(h)),
            _ => Err(format!("expected a positive number or `auto`, got `{s}`")),
        }
    }
}

/// Base mesh for a sweep. `auto` starts from `0.5 / mu_max` and coarsens by
/// factors of two until the triangle budget admits it.
pub fn base_mesh(domain: &Domain, target_h: TargetH, mu_max: f64) -> Result<(Mesh, f64)> {
    match target_h {
        TargetH::Fixed(h) => Ok((triangulate(domain, h)?, h)),
        TargetH::Auto => {
            let ceiling = 0.25 * domain.scale();
            let mut h = (RESOLUTION_LIMIT / mu_max).min(ceiling);
            loop {
                match triangulate(domain, h) {
                    Err(Error::MeshBudget { .. }) if 2.0 * h < ceiling => h *= 2.0,
                    other => return other.map(|m| (m, h)),
                }
            }
        }
    }
}

/// Uniformly refines until `mu * h_max <= 0.5`.
pub fn resolve_mesh(base: &Arc<Mesh>, domain: &Domain, mu: f64) -> Result<Arc<Mesh>> {
    let mut mesh = Arc::clone(base);
    while mu * mesh.h_max() > RESOLUTION_LIMIT {
        mesh = Arc::new(refine_uniform(&mesh, domain)?);
    }
    Ok(mesh)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub target_h: TargetH,
    pub collocation: Collocation,
    pub neumann: bool,
    pub rho: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { target_h: TargetH::Auto, collocation: Collocation::VertexMean, neumann: false, rho: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshSummary {
    pub nodes: usize,
    pub triangles: usize,
    pub h_max: f64,
    pub mu_h_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub mu: f64,
    pub mesh: MeshSummary,
    pub condition: ConditionResult,
    pub tol_margin: f64,
    pub condition_holds: bool,
    pub violating_triangles: usize,
    pub max_value: f64,
    pub min_value: f64,
    pub varadhan: VaradhanResult,
    pub solve: SolveStats,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeumannEntry {
    pub mu: f64,
    pub min_value: f64,
    pub max_value: f64,
    pub varadhan: Option<VaradhanResult>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeumannSection {
    pub status: &'static str,
    pub note: &'static str,
    pub entries: Vec<NeumannEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub domain: String,
    pub mu_list: Vec<f64>,
    pub target_h: f64,
    pub collocation: Collocation,
    pub entries: Vec<SweepEntry>,
    pub verdict: Verdict,
    pub ground_truth_convex: Option<bool>,
    pub largest_verified_mu: Option<f64>,
    pub truncated: bool,
    pub prop21: Prop21Fit,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neumann: Option<NeumannSection>,
}

impl ConvexityReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Entry for the largest `mu` whose solve met the resolution rule.
    pub fn largest_resolved(&self) -> Option<&SweepEntry> {
        self.entries.iter().rev().find(|e| e.condition.resolution_ok)
    }
}

const NEUMANN_NOTE: &str = "exploratory: Neumann data dv/dn = mu; whether -ln(v)/mu approaches the \
distance function for this problem is open, so these numbers are evidence only";

struct MuOutcome {
    entry: SweepEntry,
    fit: Prop21Fit,
    neumann: Option<NeumannEntry>,
}

fn run_mu(base: &Arc<Mesh>, domain: &Domain, mu: f64, options: &SweepOptions) -> Result<MuOutcome> {
    let mesh = resolve_mesh(base, domain, mu)?;
    let field = solve_dirichlet(Arc::clone(&mesh), mu)?;
    let grads = gradient_field(&field);
    let condition = condition_margin_with(&field, &grads, options.collocation)?;
    let max_value = field.max_value();
    let tol_margin = MARGIN_REL_TOL * mu * max_value;
    let varadhan = varadhan_error(&field, domain)?;
    let fit = prop21_fit(&[&field], domain, options.rho)?;
    let neumann = if options.neumann {
        let nf = solve_neumann(Arc::clone(&mesh), mu)?;
        let (varadhan, note) = match varadhan_error(&nf, domain) {
            Ok(v) => (Some(v), None),
            Err(e @ Error::NonPositiveValue { .. }) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        };
        Some(NeumannEntry { mu, min_value: nf.min_value(), max_value: nf.max_value(), varadhan, note })
    } else {
        None
    };
    let entry = SweepEntry {
        mu,
        mesh: MeshSummary {
            nodes: mesh.num_nodes(),
            triangles: mesh.num_triangles(),
            h_max: mesh.h_max(),
            mu_h_max: mu * mesh.h_max(),
        },
        condition_holds: condition.min_margin >= -tol_margin,
        violating_triangles: condition.violations(tol_margin),
        condition,
        tol_margin,
        max_value,
        min_value: field.min_value(),
        varadhan,
        solve: field.stats.clone(),
        warnings: field.warnings.clone(),
    };
    Ok(MuOutcome { entry, fit, neumann })
}

pub fn convexity_sweep(domain: &Domain, mu_list: &[f64], target_h: f64) -> Result<ConvexityReport> {
    let options = SweepOptions { target_h: TargetH::Fixed(target_h), ..SweepOptions::default() };
    convexity_sweep_with(domain, mu_list, &options)
}

/// Solves the Dirichlet problem for every `mu`, checks the gradient
/// condition per triangle and measures the Varadhan error.
///
/// Each `mu` refines the shared base mesh until `mu * h_max <= 0.5`. If the
/// triangle budget stops a refinement, the sweep ends at the last completed
/// `mu` and the report is marked truncated.
pub fn convexity_sweep_with(domain: &Domain, mu_list: &[f64], options: &SweepOptions) -> Result<ConvexityReport> {
    if mu_list.is_empty() {
        return Err(Error::InvalidArgument("mu list is empty".into()));
    }
    if mu_list.iter().any(|&m| !(m > 0.0 && m.is_finite())) || mu_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("mu list must be positive and strictly ascending".into()));
    }
    let mu_max = *mu_list.last().unwrap();
    let (base, target_h) = base_mesh(domain, options.target_h, mu_max)?;
    let base = Arc::new(base);
    let outcomes: Vec<Result<MuOutcome>> =
        mu_list.par_iter().map(|&mu| run_mu(&base, domain, mu, options)).collect();

    let mut entries = Vec::new();
    let mut fits = Vec::new();
    let mut neumann_entries = Vec::new();
    let mut notes = Vec::new();
    let mut truncated = false;
    for (outcome, &mu) in outcomes.into_iter().zip(mu_list) {
        match outcome {
            Ok(o) => {
                entries.push(o.entry);
                fits.push(o.fit);
                neumann_entries.extend(o.neumann);
            }
            Err(Error::MeshBudget { requested, limit }) if !entries.is_empty() => {
                truncated = true;
                notes.push(format!(
                    "sweep truncated at mu = {mu}: {requested} triangles needed, budget is {limit}; \
                     largest completed mu = {}",
                    entries.last().map(|e: &SweepEntry| e.mu).unwrap_or(f64::NAN)
                ));
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let holds = entries.iter().filter(|e| e.condition.resolution_ok).all(|e| e.condition_holds);
    let verdict = if holds { Verdict::ConditionHolds } else { Verdict::ConditionFails };
    let largest_verified_mu = entries
        .iter()
        .filter(|e| e.condition.resolution_ok && e.condition_holds)
        .map(|e| e.mu)
        .reduce(f64::max);
    notes.push(format!(
        "condition checked per triangle as mu * v - |grad v| with {} collocation; tolerance {MARGIN_REL_TOL:e} * mu * max v",
        match options.collocation {
            Collocation::VertexMean => "vertex-mean",
            Collocation::MinVertex => "min-vertex",
            Collocation::LogGradient => "log-gradient",
        }
    ));
    notes.push(match verdict {
        Verdict::ConditionHolds => format!(
            "condition holds at every tested mu up to {}; only a finite prefix of large mu is checked",
            largest_verified_mu.unwrap_or(f64::NAN)
        ),
        Verdict::ConditionFails => {
            "no convexity certificate at the tested mu; the test is one-directional \
             (condition implies convexity), so this is evidence of nonconvexity, not a proof"
                .to_string()
        }
    });
    let neumann = options.neumann.then_some(NeumannSection {
        status: "exploratory",
        note: NEUMANN_NOTE,
        entries: neumann_entries,
    });
    Ok(ConvexityReport {
        domain: domain.describe(),
        mu_list: mu_list.to_vec(),
        target_h,
        collocation: options.collocation,
        entries,
        verdict,
        ground_truth_convex: Some(domain.is_convex_polygon()),
        largest_verified_mu,
        truncated,
        prop21: Prop21Fit::combine(fits)?,
        notes,
        neumann,
    })
}

/// `start, start * factor, ...` with `count` terms.
pub fn geometric_mu_list(start: f64, factor: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && start.is_finite()) || !(factor > 1.0 && factor.is_finite()) || count == 0 {
        return Err(Error::InvalidArgument(format!(
            "sweep needs start > 0, factor > 1, count >= 1 (got {start}, {factor}, {count})"
        )));
    }
    Ok((0..count).map(|k| start * factor.powi(k as i32)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_target_h() {
        assert_eq!("auto".parse::<TargetH>(), Ok(TargetH::Auto));
        assert_eq!("0.05".parse::<TargetH>(), Ok(TargetH::Fixed(0.05)));
        assert!("-1".parse::<TargetH>().is_err());
        assert!("fine".parse::<TargetH>().is_err());
    }

    #[test]
    fn geometric_list() {
        assert_eq!(geometric_mu_list(5.0, 2.0, 4).unwrap(), vec![5.0, 10.0, 20.0, 40.0]);
        assert!(geometric_mu_list(5.0, 1.0, 4).is_err());
        assert!(geometric_mu_list(5.0, 2.0, 0).is_err());
    }

    #[test]
    fn small_l_shape_sweep_fails_near_corner() {
        let report = convexity_sweep(&Domain::l_shape(), &[2.0, 4.0], 0.1).unwrap();
        assert_eq!(report.verdict, Verdict::ConditionFails);
        assert_eq!(report.ground_truth_convex, Some(false));
        let last = report.entries.last().unwrap();
        let c = last.condition.argmin_centroid;
        assert!(((c.x1 - 1.0).powi(2) + (c.x2 - 1.0).powi(2)).sqrt() < 0.2);
        assert!(report.entries.iter().all(|e| e.mesh.mu_h_max <= 0.5));
    }

    #[test]
    fn rejects_unsorted_mu() {
        assert!(convexity_sweep(&Domain::unit_square(), &[4.0, 2.0], 0.1).is_err());
        assert!(convexity_sweep(&Domain::unit_square(), &[], 0.1).is_err());
    }

    #[test]
    fn neumann_section_is_labelled() {
        let options = SweepOptions { neumann: true, target_h: TargetH::Fixed(0.1), ..SweepOptions::default() };
        let report = convexity_sweep_with(&Domain::unit_disc(), &[3.0], &options).unwrap();
        let section = report.neumann.unwrap();
        assert_eq!(section.status, "exploratory");
        assert_eq!(section.entries.len(), 1);
        assert!(section.entries[0].varadhan.is_some());
    }
}
