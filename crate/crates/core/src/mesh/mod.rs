//! Conforming triangulations of [`Domain`]s.
//!
//! Polygons are meshed by ear clipping followed by uniform refinement and a
//! few sweeps of constrained Laplacian smoothing; discs use a concentric
//! structured mesh with boundary nodes exactly on the circle.

mod build;
mod quality;

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};

pub use build::triangulate;
pub use quality::{mesh_quality, MeshQuality};

/// Largest number of triangles any construction or refinement may produce.
pub const TRIANGLE_BUDGET: usize = 2_000_000;

/// A boundary edge, oriented so that the mesh lies to its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    /// Outward unit normal.
    pub normal: Point2,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<Point2>,
    /// Counterclockwise node-index triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_node: Vec<bool>,
    pub boundary_edges: Vec<BoundaryEdge>,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Mesh {
    /// Builds the boundary description from nodes and triangles.
    pub fn from_parts(nodes: Vec<Point2>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut uses: HashMap<(usize, usize), u32> = HashMap::with_capacity(3 * triangles.len());
        for tri in &triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if a >= nodes.len() || b >= nodes.len() {
                    return Err(Error::InvalidArgument(format!("triangle refers to missing node {}", a.max(b))));
                }
                *uses.entry(edge_key(a, b)).or_insert(0) += 1;
            }
        }
        if let Some((edge, count)) = uses.iter().find(|(_, &c)| c > 2) {
            return Err(Error::InvalidArgument(format!(
                "edge {edge:?} is shared by {count} triangles"
            )));
        }
        let mut boundary_node = vec![false; nodes.len()];
        let mut boundary_edges = Vec::new();
        for tri in &triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if uses[&edge_key(a, b)] == 1 {
                    let d = nodes[b] - nodes[a];
                    let length = d.norm();
                    boundary_node[a] = true;
                    boundary_node[b] = true;
                    boundary_edges.push(BoundaryEdge {
                        nodes: [a, b],
                        normal: Point2::new(d.x2 / length, -d.x1 / length),
                        length,
                    });
                }
            }
        }
        Ok(Self { nodes, triangles, boundary_node, boundary_edges })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn corners(&self, t: usize) -> [Point2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * (b - a).cross(c - a)
    }

    pub fn centroid(&self, t: usize) -> Point2 {
        let [a, b, c] = self.corners(t);
        Point2::new((a.x1 + b.x1 + c.x1) / 3.0, (a.x2 + b.x2 + c.x2) / 3.0)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.signed_area(t)).sum()
    }

    /// Longest edge length.
    pub fn h_max(&self) -> f64 {
        self.edge_lengths().fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        self.edge_lengths().fold(f64::INFINITY, f64::min)
    }

    fn edge_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.triangles.iter().flat_map(move |tri| {
            (0..3).map(move |k| self.nodes[tri[k]].distance(self.nodes[tri[(k + 1) % 3]]))
        })
    }

    /// Checks orientation, conformity, orphan nodes, flag consistency and, when
    /// a domain is given, that boundary nodes lie on its boundary.
    pub fn validate(&self, domain: Option<&Domain>) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        let mut used = vec![false; self.num_nodes()];
        for (t, tri) in self.triangles.iter().enumerate() {
            if self.signed_area(t) <= 0.0 {
                return bad(format!("triangle {t} is not positively oriented"));
            }
            for &n in tri {
                used[n] = true;
            }
        }
        if let Some(n) = used.iter().position(|u| !u) {
            return bad(format!("node {n} belongs to no triangle"));
        }
        let mut uses: HashMap<(usize, usize), u32> = HashMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                *uses.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        if uses.values().any(|&c| c == 0 || c > 2) {
            return bad("nonconforming edge".into());
        }
        let mut on_edge = vec![false; self.num_nodes()];
        for (edge, &count) in &uses {
            if count == 1 {
                on_edge[edge.0] = true;
                on_edge[edge.1] = true;
            }
        }
        if on_edge != self.boundary_node {
            return bad("boundary flags disagree with boundary edges".into());
        }
        if let Some(domain) = domain {
            let tol = 1e-10 * domain.scale();
            for (i, p) in self.nodes.iter().enumerate() {
                if self.boundary_node[i] && domain.boundary_distance(*p) > tol {
                    return bad(format!("boundary node {i} is off the domain boundary"));
                }
            }
        }
        Ok(())
    }

    /// Plain-text dump: a `# nodes N` header followed by `x y boundary_flag`
    /// lines, then `# triangles T` followed by `i j k` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# nodes {}", self.num_nodes()).unwrap();
        for (p, &b) in self.nodes.iter().zip(&self.boundary_node) {
            writeln!(out, "{:.16e} {:.16e} {}", p.x1, p.x2, u8::from(b)).unwrap();
        }
        writeln!(out, "# triangles {}", self.num_triangles()).unwrap();
        for [a, b, c] in &self.triangles {
            writeln!(out, "{a} {b} {c}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, msg: &str| Error::Parse(format!("line {}: {msg}", line + 1));
        let mut lines = text.lines().enumerate();
        let count = |header: Option<(usize, &str)>, key: &str| -> Result<usize> {
            let (i, line) = header.ok_or_else(|| Error::Parse(format!("missing '# {key}' header")))?;
            line.strip_prefix(&format!("# {key} "))
                .and_then(|n| n.trim().parse().ok())
                .ok_or_else(|| parse_err(i, &format!("expected '# {key} <count>'")))
        };
        let num_nodes = count(lines.next(), "nodes")?;
        let mut nodes = Vec::with_capacity(num_nodes);
        for _ in 0..num_nodes {
            let (i, line) = lines.next().ok_or_else(|| Error::Parse("truncated node list".into()))?;
            let fields: Vec<f64> = line
                .split_whitespace()
                .map(|f| f.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(i, "expected 'x y flag'"))?;
            if fields.len() != 3 {
                return Err(parse_err(i, "expected 'x y flag'"));
            }
            nodes.push(Point2::new(fields[0], fields[1]));
        }
        let num_triangles = count(lines.next(), "triangles")?;
        let mut triangles = Vec::with_capacity(num_triangles);
        for _ in 0..num_triangles {
            let (i, line) = lines.next().ok_or_else(|| Error::Parse("truncated triangle list".into()))?;
            let idx: Vec<usize> = line
                .split_whitespace()
                .map(|f| f.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(i, "expected 'i j k'"))?;
            if idx.len() != 3 {
                return Err(parse_err(i, "expected 'i j k'"));
            }
            triangles.push([idx[0], idx[1], idx[2]]);
        }
        Mesh::from_parts(nodes, triangles)
    }
}

/// Splits every triangle into four through its edge midpoints. Midpoints of
/// boundary edges of a disc domain are projected onto the circle.
pub fn refine_uniform(mesh: &Mesh, domain: &Domain) -> Result<Mesh> {
    let requested = 4 * mesh.num_triangles();
    if requested > TRIANGLE_BUDGET {
        return Err(Error::MeshBudget { requested, limit: TRIANGLE_BUDGET });
    }
    let mut nodes = mesh.nodes.clone();
    let mut midpoint_of: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * mesh.num_triangles() / 2 + 8);
    let mut boundary_edge = std::collections::HashSet::new();
    for e in &mesh.boundary_edges {
        boundary_edge.insert(edge_key(e.nodes[0], e.nodes[1]));
    }
    let mut triangles = Vec::with_capacity(requested);
    for tri in &mesh.triangles {
        let mut mids = [0usize; 3];
        for k in 0..3 {
            let key = edge_key(tri[k], tri[(k + 1) % 3]);
            mids[k] = *midpoint_of.entry(key).or_insert_with(|| {
                let mut m = nodes[key.0].midpoint(nodes[key.1]);
                if let Domain::Disc { center, radius } = domain {
                    if boundary_edge.contains(&key) {
                        let d = m - *center;
                        m = *center + (radius / d.norm()) * d;
                    }
                }
                nodes.push(m);
                nodes.len() - 1
            });
        }
        let [a, b, c] = *tri;
        let [ab, bc, ca] = mids;
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }
    Mesh::from_parts(nodes, triangles)
}
