use std::f64::consts::PI;

use super::{refine_uniform, Mesh, TRIANGLE_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, GEOM_TOL};

const SMOOTHING_SWEEPS: usize = 10;

/// Meshes `domain` with longest edge at most `1.5 * target_h`.
///
/// Discs get a concentric structured mesh with `h_max <= target_h`. Polygons
/// are ear-clipped, uniformly refined until the bound holds and then smoothed
/// for ten sweeps with boundary nodes fixed.
pub fn triangulate(domain: &Domain, target_h: f64) -> Result<Mesh> {
    if !(target_h > 0.0 && target_h < 0.5 * domain.scale()) {
        return Err(Error::InvalidArgument(format!(
            "target_h must lie in (0, {}), got {target_h}",
            0.5 * domain.scale()
        )));
    }
    match domain {
        Domain::Disc { center, radius } => disc_mesh(*center, *radius, target_h),
        Domain::Polygon { vertices } => {
            let mut mesh = ear_clip(vertices)?;
            while mesh.h_max() > 1.5 * target_h {
                mesh = refine_uniform(&mesh, domain)?;
            }
            smooth_interior(&mut mesh, SMOOTHING_SWEEPS);
            Ok(mesh)
        }
    }
}

fn min_angle(a: Point2, b: Point2, c: Point2) -> f64 {
    let angle = |p: Point2, q: Point2, r: Point2| {
        let u = q - p;
        let v = r - p;
        u.cross(v).abs().atan2(u.dot(v))
    };
    angle(a, b, c).min(angle(b, c, a)).min(angle(c, a, b))
}

fn inside_or_on_triangle(p: Point2, a: Point2, b: Point2, c: Point2, tol: f64) -> bool {
    (b - a).cross(p - a) >= -tol && (c - b).cross(p - b) >= -tol && (a - c).cross(p - c) >= -tol
}

/// Ear clipping that always removes the best-shaped ear (largest minimum
/// angle, ties to the earliest vertex).
fn ear_clip(vertices: &[Point2]) -> Result<Mesh> {
    let scale = {
        let d = Domain::polygon(vertices.to_vec())?;
        d.scale()
    };
    let tol = GEOM_TOL * scale * scale;
    let mut ring: Vec<usize> = (0..vertices.len()).collect();
    let mut triangles = Vec::with_capacity(vertices.len() - 2);
    while ring.len() > 3 {
        let m = ring.len();
        let mut best: Option<(usize, f64)> = None;
        for pos in 0..m {
            let (ia, ib, ic) = (ring[(pos + m - 1) % m], ring[pos], ring[(pos + 1) % m]);
            let (a, b, c) = (vertices[ia], vertices[ib], vertices[ic]);
            if (b - a).cross(c - b) <= tol {
                continue;
            }
            let blocked = ring.iter().any(|&j| {
                j != ia && j != ib && j != ic && inside_or_on_triangle(vertices[j], a, b, c, tol)
            });
            if blocked {
                continue;
            }
            let quality = min_angle(a, b, c);
            if best.is_none_or(|(_, q)| quality > q) {
                best = Some((pos, quality));
            }
        }
        let (pos, _) = best.ok_or_else(|| Error::DegeneratePolygon("no ear found".into()))?;
        let m = ring.len();
        let tri = [ring[(pos + m - 1) % m], ring[pos], ring[(pos + 1) % m]];
        check_area(vertices, tri, tol)?;
        triangles.push(tri);
        ring.remove(pos);
    }
    let tri = [ring[0], ring[1], ring[2]];
    check_area(vertices, tri, tol)?;
    triangles.push(tri);
    Mesh::from_parts(vertices.to_vec(), triangles)
}

fn check_area(vertices: &[Point2], [a, b, c]: [usize; 3], tol: f64) -> Result<()> {
    let area = 0.5 * (vertices[b] - vertices[a]).cross(vertices[c] - vertices[a]);
    if area <= tol {
        return Err(Error::DegeneratePolygon(format!(
            "triangle ({a}, {b}, {c}) has area {area:e}"
        )));
    }
    Ok(())
}

/// Laplacian smoothing of interior nodes. A move is kept only if every
/// incident triangle stays positively oriented and the smallest incident
/// angle does not shrink.
fn smooth_interior(mesh: &mut Mesh, sweeps: usize) {
    let n = mesh.num_nodes();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            incident[tri[k]].push(t);
            for j in 1..3 {
                let other = tri[(k + j) % 3];
                if !neighbours[tri[k]].contains(&other) {
                    neighbours[tri[k]].push(other);
                }
            }
        }
    }
    let patch_min_angle = |mesh: &Mesh, node: usize| -> Option<f64> {
        let mut worst = f64::INFINITY;
        for &t in &incident[node] {
            if mesh.signed_area(t) <= 0.0 {
                return None;
            }
            let [a, b, c] = mesh.corners(t);
            worst = worst.min(min_angle(a, b, c));
        }
        Some(worst)
    };
    for _ in 0..sweeps {
        let mut moved = false;
        for i in 0..n {
            if mesh.boundary_node[i] || neighbours[i].is_empty() {
                continue;
            }
            let k = neighbours[i].len() as f64;
            let (sx, sy) = neighbours[i]
                .iter()
                .fold((0.0, 0.0), |(x, y), &j| (x + mesh.nodes[j].x1, y + mesh.nodes[j].x2));
            let target = Point2::new(sx / k, sy / k);
            let old = mesh.nodes[i];
            if target == old {
                continue;
            }
            let before = patch_min_angle(mesh, i).unwrap_or(f64::NEG_INFINITY);
            mesh.nodes[i] = target;
            match patch_min_angle(mesh, i) {
                Some(after) if after > before => moved = true,
                _ => mesh.nodes[i] = old,
            }
        }
        if !moved {
            break;
        }
    }
}

/// Concentric mesh: ring `k` (radius `k R / n`) carries `6k` equally spaced
/// nodes, and each of the six sectors between rings `k` and `k + 1` is filled
/// with `2k + 1` triangles ordered by segment mid-angle.
fn disc_mesh(center: Point2, radius: f64, target_h: f64) -> Result<Mesh> {
    let mut rings = ((radius / target_h).ceil() as usize).max(1);
    loop {
        let requested = 6 * rings * rings;
        if requested > TRIANGLE_BUDGET {
            return Err(Error::MeshBudget { requested, limit: TRIANGLE_BUDGET });
        }
        let mesh = concentric_disc(center, radius, rings)?;
        if mesh.h_max() <= target_h {
            return Ok(mesh);
        }
        rings += 1;
    }
}

fn concentric_disc(center: Point2, radius: f64, rings: usize) -> Result<Mesh> {
    let offset = |k: usize| if k == 0 { 0 } else { 1 + 3 * k * (k - 1) };
    let mut nodes = Vec::with_capacity(offset(rings + 1));
    nodes.push(center);
    for k in 1..=rings {
        // the outermost ring is placed exactly on the circle
        let r = if k == rings { radius } else { radius * k as f64 / rings as f64 };
        let count = 6 * k;
        for j in 0..count {
            let t = 2.0 * PI * j as f64 / count as f64;
            nodes.push(center + Point2::new(r * t.cos(), r * t.sin()));
        }
    }
    let mut triangles = Vec::with_capacity(6 * rings * rings);
    for k in 0..rings {
        let inner = |t: usize| if k == 0 { 0 } else { offset(k) + t % (6 * k) };
        let outer = |t: usize| offset(k + 1) + t % (6 * (k + 1));
        for sector in 0..6 {
            let (mut ti, mut to) = (0usize, 0usize);
            let (base_i, base_o) = (sector * k, sector * (k + 1));
            while ti < k || to < k + 1 {
                let advance_outer = ti == k
                    || (to < k + 1
                        && (to as f64 + 0.5) / ((k + 1) as f64) < (ti as f64 + 0.5) / (k as f64));
                if advance_outer {
                    triangles.push([inner(base_i + ti), outer(base_o + to), outer(base_o + to + 1)]);
                    to += 1;
                } else {
                    triangles.push([inner(base_i + ti), outer(base_o + to), inner(base_i + ti + 1)]);
                    ti += 1;
                }
            }
        }
    }
    Mesh::from_parts(nodes, triangles)
}
