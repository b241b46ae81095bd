use thiserror::Error;

/// Errors produced by the geometry, meshing, solver and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("point ({x}, {y}) lies outside the domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("probe disc (center ({x}, {y}), radius {radius}) is not contained in the domain")]
    ProbeOutside { x: f64, y: f64, radius: f64 },

    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("triangle budget exceeded: {requested} triangles requested, limit is {limit}")]
    MeshBudget { requested: usize, limit: usize },

    #[error("conjugate gradients did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("nonpositive field value {value:e} at node {node}")]
    NonPositiveValue { node: usize, value: f64 },

    #[error("field and gradient are defined on different meshes")]
    MeshMismatch,

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed domain file: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
