use serde::Serialize;

use super::Mesh;

/// Angle and edge-length extrema of a mesh. Angles are in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshQuality {
    pub min_angle: f64,
    pub max_angle: f64,
    pub h_max: f64,
    pub h_min: f64,
    /// Fraction of triangles whose largest angle is at most 90 degrees.
    pub nonobtuse_fraction: f64,
}

fn angles_deg(mesh: &Mesh, t: usize) -> [f64; 3] {
    let p = mesh.corners(t);
    let mut out = [0.0; 3];
    for k in 0..3 {
        let u = p[(k + 1) % 3] - p[k];
        let v = p[(k + 2) % 3] - p[k];
        out[k] = u.cross(v).abs().atan2(u.dot(v)).to_degrees();
    }
    out
}

pub fn mesh_quality(mesh: &Mesh) -> MeshQuality {
    let mut min_angle = f64::INFINITY;
    let mut max_angle: f64 = 0.0;
    let mut nonobtuse = 0usize;
    for t in 0..mesh.num_triangles() {
        let a = angles_deg(mesh, t);
        let lo = a[0].min(a[1]).min(a[2]);
        let hi = a[0].max(a[1]).max(a[2]);
        min_angle = min_angle.min(lo);
        max_angle = max_angle.max(hi);
        if hi <= 90.0 + 1e-9 {
            nonobtuse += 1;
        }
    }
    MeshQuality {
        min_angle,
        max_angle,
        h_max: mesh.h_max(),
        h_min: mesh.h_min(),
        nonobtuse_fraction: nonobtuse as f64 / mesh.num_triangles().max(1) as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    #[test]
    fn equilateral() {
        let nodes = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 0.75f64.sqrt()),
        ];
        let q = mesh_quality(&Mesh::from_parts(nodes, vec![[0, 1, 2]]).unwrap());
        assert!((q.min_angle - 60.0).abs() < 1e-9);
        assert!((q.max_angle - 60.0).abs() < 1e-9);
        assert_eq!(q.nonobtuse_fraction, 1.0);
    }

    #[test]
    fn square_diagonal_split() {
        let nodes = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let q = mesh_quality(&Mesh::from_parts(nodes, vec![[0, 1, 2], [0, 2, 3]]).unwrap());
        assert!((q.min_angle - 45.0).abs() < 1e-9);
        assert!((q.max_angle - 90.0).abs() < 1e-9);
        assert_eq!(q.nonobtuse_fraction, 1.0);
        assert!((q.h_max - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(q.h_min, 1.0);
    }
}
