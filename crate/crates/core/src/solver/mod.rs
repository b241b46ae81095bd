//! P1 finite elements for `-lap v + mu^2 v = 0`.
//!
//! The `mu^2` term uses the lumped mass matrix, so on meshes without obtuse
//! angles the discrete operator is an M-matrix and Dirichlet solutions obey
//! `0 < v <= 1`. Systems are solved by Jacobi-preconditioned CG; when the
//! operator has the M-matrix sign pattern the CG iterate is then polished by
//! symmetric Gauss–Seidel so that exponentially small interior values are
//! accurate to working precision in the relative sense, which the Varadhan
//! transform `-ln(v) / mu` needs.

pub mod assembly;
pub mod sparse;

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::mesh::Mesh;
use assembly::{assemble_operator, boundary_load};
use sparse::{gauss_seidel_polish, solve_spd_system, CsrMatrix, SpdSystem};

/// Solves are flagged unreliable when `mu * h_max` exceeds this.
pub const RESOLUTION_LIMIT: f64 = 0.5;

/// Relative residual at which CG stops.
pub const CG_TOLERANCE: f64 = 1e-10;

const POLISH_TOLERANCE: f64 = 1e-13;
const POLISH_MAX_SWEEPS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// `v = 1` on the boundary.
    Dirichlet,
    /// `dv/dn = flux` on the boundary.
    Neumann,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub dofs: usize,
    pub cg_iterations: usize,
    pub cg_relative_residual: f64,
    pub polish_sweeps: usize,
}

/// Nodal values `v(x, mu)` on a mesh.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub mesh: Arc<Mesh>,
    pub mu: f64,
    pub values: Vec<f64>,
    pub problem: Problem,
    /// `mu * h_max <= 0.5`.
    pub resolution_ok: bool,
    pub warnings: Vec<String>,
    pub stats: SolveStats,
}

impl ScalarField {
    /// A field given by a formula at the nodes (analytic oracles, tests).
    pub fn sampled(mesh: Arc<Mesh>, mu: f64, problem: Problem, f: impl Fn(Point2) -> f64) -> Self {
        let values = mesh.nodes.iter().map(|&p| f(p)).collect();
        let resolution_ok = mu * mesh.h_max() <= RESOLUTION_LIMIT;
        Self { mesh, mu, values, problem, resolution_ok, warnings: Vec::new(), stats: SolveStats::default() }
    }

    /// `x y value` per node.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, v) in self.mesh.nodes.iter().zip(&self.values) {
            writeln!(out, "{:.16e} {:.16e} {:.16e}", p.x1, p.x2, v).unwrap();
        }
        out
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Index of the node closest to `p` (lowest index on ties).
    pub fn nearest_node(&self, p: Point2) -> usize {
        let mut best = (0, f64::INFINITY);
        for (i, q) in self.mesh.nodes.iter().enumerate() {
            let d = q.distance(p);
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }
}

/// Per-triangle constant gradients of the P1 interpolant.
#[derive(Debug, Clone)]
pub struct GradientField {
    pub mesh: Arc<Mesh>,
    pub gradients: Vec<Point2>,
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgument(format!("mu must be positive and finite, got {mu}")));
    }
    Ok(())
}

fn resolution(mesh: &Mesh, mu: f64) -> (bool, Vec<String>) {
    let product = mu * mesh.h_max();
    if product <= RESOLUTION_LIMIT {
        (true, Vec::new())
    } else {
        (
            false,
            vec![format!(
                "under-resolved: mu * h_max = {product:.4} exceeds {RESOLUTION_LIMIT}; refine the mesh"
            )],
        )
    }
}

fn solve(system: SpdSystem) -> Result<(Vec<f64>, SolveStats)> {
    let cg = solve_spd_system(&system, CG_TOLERANCE)?;
    let mut x = cg.x;
    let mut stats = SolveStats {
        dofs: system.dim(),
        cg_iterations: cg.iterations,
        cg_relative_residual: cg.relative_residual,
        polish_sweeps: 0,
    };
    if system.matrix.has_m_matrix_sign_pattern() && system.rhs.iter().all(|&b| b >= 0.0) {
        stats.polish_sweeps =
            gauss_seidel_polish(&system.matrix, &system.rhs, &mut x, POLISH_TOLERANCE, POLISH_MAX_SWEEPS);
    }
    Ok((x, stats))
}

/// Reduced system on the interior nodes with `v = 1` eliminated from the
/// boundary; returns the system and the interior node list.
pub fn dirichlet_system(mesh: &Mesh, mu: f64) -> Result<(SpdSystem, Vec<usize>)> {
    let full = assemble_operator(mesh, mu)?;
    let interior: Vec<usize> = (0..mesh.num_nodes()).filter(|&i| !mesh.boundary_node[i]).collect();
    let rhs = interior
        .iter()
        .map(|&i| {
            -full
                .row(i)
                .filter(|&(j, _)| mesh.boundary_node[j])
                .map(|(_, v)| v)
                .sum::<f64>()
        })
        .collect();
    Ok((SpdSystem::new(full.submatrix(&interior), rhs)?, interior))
}

/// P1 Galerkin solution of `int grad v . grad phi + mu^2 int v phi = 0` for all
/// interior test functions, with `v = 1` imposed strongly at boundary nodes.
pub fn solve_dirichlet(mesh: Arc<Mesh>, mu: f64) -> Result<ScalarField> {
    check_mu(mu)?;
    let (resolution_ok, warnings) = resolution(&mesh, mu);
    let mut values = vec![1.0; mesh.num_nodes()];
    let (system, interior) = dirichlet_system(&mesh, mu)?;
    let stats = if interior.is_empty() {
        SolveStats::default()
    } else {
        let (x, stats) = solve(system)?;
        for (&node, v) in interior.iter().zip(x) {
            values[node] = v;
        }
        stats
    };
    Ok(ScalarField { mesh, mu, values, problem: Problem::Dirichlet, resolution_ok, warnings, stats })
}

/// P1 Galerkin solution with `dv/dn = mu` on the boundary:
/// `int grad v . grad phi + mu^2 int v phi = mu int_boundary phi` for all nodes.
pub fn solve_neumann(mesh: Arc<Mesh>, mu: f64) -> Result<ScalarField> {
    solve_neumann_with_flux(mesh, mu, mu)
}

/// Neumann problem with a general constant flux `dv/dn = flux`.
pub fn solve_neumann_with_flux(mesh: Arc<Mesh>, mu: f64, flux: f64) -> Result<ScalarField> {
    check_mu(mu)?;
    let (resolution_ok, warnings) = resolution(&mesh, mu);
    let matrix: CsrMatrix = assemble_operator(&mesh, mu)?;
    let rhs = boundary_load(&mesh).into_iter().map(|l| flux * l).collect();
    let (values, stats) = solve(SpdSystem::new(matrix, rhs)?)?;
    Ok(ScalarField { mesh, mu, values, problem: Problem::Neumann, resolution_ok, warnings, stats })
}

/// Gradient of the linear interpolant of `values` on triangle `t`.
pub fn triangle_gradient(mesh: &Mesh, t: usize, values: &[f64]) -> Point2 {
    let tri = mesh.triangles[t];
    let p = mesh.corners(t);
    let two_area = 2.0 * mesh.signed_area(t);
    let mut g = Point2::new(0.0, 0.0);
    for k in 0..3 {
        let (j, l) = ((k + 1) % 3, (k + 2) % 3);
        let v = values[tri[k]];
        g = g + Point2::new(v * (p[j].x2 - p[l].x2), v * (p[l].x1 - p[j].x1));
    }
    (1.0 / two_area) * g
}

pub fn gradient_field(field: &ScalarField) -> GradientField {
    let gradients = (0..field.mesh.num_triangles())
        .map(|t| triangle_gradient(&field.mesh, t, &field.values))
        .collect();
    GradientField { mesh: Arc::clone(&field.mesh), gradients }
}
