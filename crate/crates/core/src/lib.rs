//! Solutions of `lap v = mu^2 v` with `v = 1` on the boundary of a planar
//! domain, and the numerical tests they support.
//!
//! For large `mu` the function `-ln(v) / mu` approaches the distance to the
//! boundary, and the bound `|grad v| <= mu v` for all large `mu` forces the
//! domain to be convex. This crate meshes polygons and discs, solves the
//! problem with P1 finite elements, and runs three checks on the result:
//!
//! - the gradient condition over a sweep of `mu` ([`analysis::convexity_sweep`]),
//! - convergence of `-ln(v) / mu` to the distance ([`analysis::varadhan_error`]),
//! - disc averages of the distance function ([`analysis::superharmonicity_probe`]).
//!
//! Closed-form solutions on the disc and half-plane live in [`special`] and
//! serve as oracles throughout.
//!
//! ```
//! use std::sync::Arc;
//! use panharmonic::{geometry::Domain, mesh::triangulate, solver::solve_dirichlet};
//!
//! let disc = Domain::unit_disc();
//! let mesh = Arc::new(triangulate(&disc, 0.05).unwrap());
//! let v = solve_dirichlet(mesh, 2.0).unwrap();
//! assert!(v.values.iter().all(|&x| x > 0.0 && x <= 1.0));
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod mesh;
pub mod quadrature;
pub mod solver;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
