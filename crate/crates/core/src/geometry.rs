//! Bounded planar domains, the distance-to-boundary function and disc averages.
//!
//! All tolerances are relative to the domain's bounding-box diagonal
//! ([`Domain::scale`]), so every predicate here is scale-free.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Relative geometric tolerance.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x1 * other.x2 - self.x2 * other.x1
    }

    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x1 + other.x1), 0.5 * (self.x2 + other.x2))
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(p: [f64; 2]) -> Self {
        Point2::new(p[0], p[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x1, p.x2]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x1 - rhs.x1, self.x2 - rhs.x2)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, rhs: Point2) -> Point2 {
        Point2::new(self * rhs.x1, self * rhs.x2)
    }
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + t * ab)
}

/// A bounded planar domain: a simple polygon (counterclockwise, no holes) or a disc.
///
/// Build values through [`Domain::polygon`] and [`Domain::disc`]; they enforce
/// the invariants every other routine relies on.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Polygon { vertices: Vec<Point2> },
    Disc { center: Point2, radius: f64 },
}

impl Domain {
    /// Validates a simple polygon and normalises it to counterclockwise order.
    pub fn polygon(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain(format!(
                "a polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidDomain(format!("vertex {i} is not finite")));
        }
        let scale = bbox_diagonal(&vertices);
        let n = vertices.len();
        for i in 0..n {
            if vertices[i].distance(vertices[(i + 1) % n]) <= GEOM_TOL * scale {
                return Err(Error::InvalidDomain(format!(
                    "vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        let area = signed_area(&vertices);
        if area.abs() <= GEOM_TOL * scale * scale {
            return Err(Error::InvalidDomain("polygon has zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        if let Some((i, j)) = find_self_intersection(&vertices, GEOM_TOL * scale * scale) {
            return Err(Error::InvalidDomain(format!("edges {i} and {j} intersect")));
        }
        Ok(Domain::Polygon { vertices })
    }

    pub fn disc(center: Point2, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidDomain("disc center is not finite".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidDomain(format!("disc radius must be positive, got {radius}")));
        }
        Ok(Domain::Disc { center, radius })
    }

    /// `[0, 1]^2`.
    pub fn unit_square() -> Self {
        Domain::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .expect("valid square")
    }

    /// The L-shaped hexagon with its reentrant corner at `(1, 1)`.
    pub fn l_shape() -> Self {
        Domain::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ])
        .expect("valid L-shape")
    }

    pub fn unit_disc() -> Self {
        Domain::Disc { center: Point2::new(0.0, 0.0), radius: 1.0 }
    }

    /// Regular `n`-gon inscribed in the circle of the given radius.
    pub fn regular_polygon(n: usize, radius: f64) -> Result<Self> {
        let vertices = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point2::new(radius * t.cos(), radius * t.sin())
            })
            .collect();
        Domain::polygon(vertices)
    }

    /// Polygon vertices in counterclockwise order; empty for a disc.
    pub fn vertices(&self) -> &[Point2] {
        match self {
            Domain::Polygon { vertices } => vertices,
            Domain::Disc { .. } => &[],
        }
    }

    /// Bounding-box diagonal.
    pub fn scale(&self) -> f64 {
        match self {
            Domain::Polygon { vertices } => bbox_diagonal(vertices),
            Domain::Disc { radius, .. } => 2.0 * std::f64::consts::SQRT_2 * radius,
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Domain::Polygon { vertices } => signed_area(vertices),
            Domain::Disc { radius, .. } => PI * radius * radius,
        }
    }

    /// The same domain scaled about the origin by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        match self {
            Domain::Polygon { vertices } => {
                Domain::polygon(vertices.iter().map(|&v| factor * v).collect())
            }
            Domain::Disc { center, radius } => Domain::disc(factor * *center, factor * radius),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Domain::Polygon { vertices } => format!(
                "polygon with {} vertices, area {}",
                vertices.len(),
                signed_area(vertices)
            ),
            Domain::Disc { center, radius } => {
                format!("disc centred at ({}, {}) with radius {}", center.x1, center.x2, radius)
            }
        }
    }

    /// Distance from `p` to the boundary without checking that `p` is inside.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        match self {
            Domain::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| point_segment_distance(p, vertices[i], vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            Domain::Disc { center, radius } => (radius - p.distance(*center)).abs(),
        }
    }

    /// `d(p, boundary)` for `p` in the closed domain.
    pub fn distance_to_boundary(&self, p: Point2) -> Result<f64> {
        let d = self.boundary_distance(p);
        if d <= GEOM_TOL * self.scale() {
            return Ok(d);
        }
        let inside = match self {
            Domain::Polygon { vertices } => crossing_parity(vertices, p),
            Domain::Disc { center, radius } => p.distance(*center) < *radius,
        };
        if inside {
            Ok(d)
        } else {
            Err(Error::OutsideDomain { x: p.x1, y: p.x2 })
        }
    }

    /// True iff `p` is in the open domain and farther than `1e-12 * scale` from
    /// the boundary.
    pub fn contains_point(&self, p: Point2) -> bool {
        if !p.is_finite() || self.boundary_distance(p) <= GEOM_TOL * self.scale() {
            return false;
        }
        match self {
            Domain::Polygon { vertices } => crossing_parity(vertices, p),
            Domain::Disc { center, radius } => p.distance(*center) < *radius,
        }
    }

    /// Convexity ground truth. Discs are convex.
    pub fn is_convex_polygon(&self) -> bool {
        match self {
            Domain::Polygon { vertices } => {
                let tol = GEOM_TOL * bbox_diagonal(vertices).powi(2);
                corner_turns(vertices).all(|turn| turn >= -tol)
            }
            Domain::Disc { .. } => true,
        }
    }

    /// Indices of polygon vertices with interior angle above 180 degrees.
    pub fn reentrant_corners(&self) -> Vec<usize> {
        match self {
            Domain::Polygon { vertices } => {
                let tol = GEOM_TOL * bbox_diagonal(vertices).powi(2);
                corner_turns(vertices)
                    .enumerate()
                    .filter(|&(_, turn)| turn < -tol)
                    .map(|(i, _)| i)
                    .collect()
            }
            Domain::Disc { .. } => Vec::new(),
        }
    }

    /// Checks that the closed probe disc lies inside the domain.
    pub fn check_probe(&self, probe: &ProbeDisc) -> Result<()> {
        let outside = Error::ProbeOutside {
            x: probe.center.x1,
            y: probe.center.x2,
            radius: probe.radius,
        };
        if !self.contains_point(probe.center) {
            return Err(outside);
        }
        let clearance = self.boundary_distance(probe.center) - probe.radius;
        if clearance <= GEOM_TOL * self.scale() {
            return Err(outside);
        }
        Ok(())
    }

    /// Mean of `d(., boundary)` over the probe disc by a tensor rule:
    /// `radial_order`-point Gauss–Legendre in the radius (with the `s ds`
    /// Jacobian) times the `angular_order`-point periodic trapezoid rule.
    pub fn disc_mean_distance(
        &self,
        probe: &ProbeDisc,
        radial_order: usize,
        angular_order: usize,
    ) -> Result<f64> {
        if radial_order < 4 || angular_order < 8 {
            return Err(Error::InvalidArgument(format!(
                "quadrature orders must be at least (4, 8), got ({radial_order}, {angular_order})"
            )));
        }
        self.check_probe(probe)?;
        let (nodes, weights) = gauss_legendre(radial_order);
        let rho = probe.radius;
        let angles: Vec<(f64, f64)> = (0..angular_order)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / angular_order as f64;
                (t.cos(), t.sin())
            })
            .collect();
        let mut integral = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            let s = 0.5 * rho * (1.0 + x);
            let ring: f64 = angles
                .iter()
                .map(|&(c, sn)| {
                    self.boundary_distance(probe.center + Point2::new(s * c, s * sn))
                })
                .sum();
            integral += w * 0.5 * rho * s * ring * (2.0 * PI / angular_order as f64);
        }
        Ok(integral / (PI * rho * rho))
    }

    /// Distance from polygon vertex `index` to the edges not incident to it.
    pub fn corner_clearance(&self, index: usize) -> Result<f64> {
        let vertices = self.vertices();
        let n = vertices.len();
        if index >= n {
            return Err(Error::InvalidArgument(format!("no polygon vertex {index}")));
        }
        let v = vertices[index];
        Ok((0..n)
            .filter(|&i| i != index && (i + 1) % n != index)
            .map(|i| point_segment_distance(v, vertices[i], vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min))
    }

    /// The probe from the Armitage–Kuran construction at a corner: centre at
    /// distance `r/4` along the inward angle bisector, radius `r/8`.
    pub fn canonical_probe(&self, index: usize, r: f64) -> Result<ProbeDisc> {
        let vertices = self.vertices();
        let n = vertices.len();
        if index >= n {
            return Err(Error::InvalidArgument(format!("no polygon vertex {index}")));
        }
        let v = vertices[index];
        let prev = vertices[(index + n - 1) % n];
        let next = vertices[(index + 1) % n];
        let e1 = unit(prev - v);
        let e2 = unit(next - v);
        let sum = e1 + e2;
        let turn = (v - prev).cross(next - v);
        let direction = if sum.norm() < 1e-12 {
            // straight angle: inward normal of the counterclockwise edge
            Point2::new(-e2.x2, e2.x1)
        } else if turn < 0.0 {
            -1.0 * unit(sum)
        } else {
            unit(sum)
        };
        let probe = ProbeDisc::new(v + (0.25 * r) * direction, 0.125 * r)?;
        self.check_probe(&probe)?;
        Ok(probe)
    }
}

fn unit(p: Point2) -> Point2 {
    (1.0 / p.norm()) * p
}

fn bbox_diagonal(points: &[Point2]) -> f64 {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2::new(lo.x1.min(p.x1), lo.x2.min(p.x2));
        hi = Point2::new(hi.x1.max(p.x1), hi.x2.max(p.x2));
    }
    hi.distance(lo)
}

/// Shoelace formula; positive for counterclockwise order.
pub fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum::<f64>()
}

/// Cross product of consecutive edges at each vertex.
fn corner_turns(vertices: &[Point2]) -> impl Iterator<Item = f64> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| {
        let prev = vertices[(i + n - 1) % n];
        let next = vertices[(i + 1) % n];
        (vertices[i] - prev).cross(next - vertices[i])
    })
}

/// Even–odd ray crossing test along `+x1`.
fn crossing_parity(vertices: &[Point2], p: Point2) -> bool {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if (a.x2 > p.x2) != (b.x2 > p.x2) {
            let x = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
            if p.x1 < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn orientation(a: Point2, b: Point2, c: Point2, tol: f64) -> i8 {
    let v = (b - a).cross(c - a);
    if v > tol {
        1
    } else if v < -tol {
        -1
    } else {
        0
    }
}

fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    p.x1 >= a.x1.min(b.x1) && p.x1 <= a.x1.max(b.x1) && p.x2 >= a.x2.min(b.x2) && p.x2 <= a.x2.max(b.x2)
}

fn segments_touch(a: Point2, b: Point2, c: Point2, d: Point2, tol: f64) -> bool {
    let o1 = orientation(a, b, c, tol);
    let o2 = orientation(a, b, d, tol);
    let o3 = orientation(c, d, a, tol);
    let o4 = orientation(c, d, b, tol);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(c, a, b))
        || (o2 == 0 && on_segment(d, a, b))
        || (o3 == 0 && on_segment(a, c, d))
        || (o4 == 0 && on_segment(b, c, d))
}

fn find_self_intersection(vertices: &[Point2], tol: f64) -> Option<(usize, usize)> {
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if adjacent {
                // adjacent edges may only share their common vertex
                let (shared, other_a, other_c) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if orientation(other_a, shared, other_c, tol) == 0
                    && (other_c - shared).dot(other_a - shared) > 0.0
                {
                    return Some((i, j));
                }
                continue;
            }
            if segments_touch(a, b, c, d, tol) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A disc used to test the area mean-value inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeDisc {
    pub center: Point2,
    pub radius: f64,
}

impl ProbeDisc {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !center.is_finite() || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "probe needs a finite centre and positive radius, got radius {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let disc = Domain::unit_disc();
        assert_eq!(disc.distance_to_boundary(Point2::new(0.0, 0.0)).unwrap(), 1.0);
        let square = Domain::unit_square();
        assert_eq!(square.distance_to_boundary(Point2::new(0.5, 0.5)).unwrap(), 0.5);
        assert_eq!(square.distance_to_boundary(Point2::new(1.0, 0.3)).unwrap(), 0.0);
        assert!(square.distance_to_boundary(Point2::new(1.5, 0.5)).is_err());
        assert!(disc.distance_to_boundary(Point2::new(0.0, 1.01)).is_err());
    }

    #[test]
    fn contains_examples() {
        let square = Domain::unit_square();
        assert!(square.contains_point(Point2::new(0.5, 0.5)));
        assert!(!square.contains_point(Point2::new(1.5, 0.5)));
        assert!(!square.contains_point(Point2::new(1.0, 0.5)));
        let l = Domain::l_shape();
        assert!(!l.contains_point(Point2::new(1.5, 1.5)));
        assert!(l.contains_point(Point2::new(1.5, 0.5)));
        assert!(l.contains_point(Point2::new(0.5, 1.5)));
    }

    #[test]
    fn convexity_examples() {
        assert!(Domain::unit_square().is_convex_polygon());
        assert!(!Domain::l_shape().is_convex_polygon());
        assert!(Domain::regular_polygon(6, 1.0).unwrap().is_convex_polygon());
        assert!(Domain::unit_disc().is_convex_polygon());
        assert_eq!(Domain::l_shape().reentrant_corners(), vec![3]);
        assert!(Domain::unit_square().reentrant_corners().is_empty());
    }

    #[test]
    fn polygon_validation() {
        let p = |x, y| Point2::new(x, y);
        assert!(Domain::polygon(vec![p(0.0, 0.0), p(1.0, 0.0)]).is_err());
        // bow tie
        assert!(Domain::polygon(vec![p(0.0, 0.0), p(1.0, 1.0), p(1.0, 0.0), p(0.0, 1.0)]).is_err());
        // repeated vertex
        assert!(Domain::polygon(vec![p(0.0, 0.0), p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]).is_err());
        // collinear
        assert!(Domain::polygon(vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)]).is_err());
        // clockwise input is reoriented
        let cw = Domain::polygon(vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 0.0)]).unwrap();
        assert!(cw.area() > 0.0);
        assert!(Domain::disc(p(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn canonical_probe_at_l_corner() {
        let l = Domain::l_shape();
        assert!((l.corner_clearance(3).unwrap() - 1.0).abs() < 1e-15);
        let probe = l.canonical_probe(3, 0.8).unwrap();
        let offset = 0.2 / std::f64::consts::SQRT_2;
        assert!((probe.center.x1 - (1.0 - offset)).abs() < 1e-15);
        assert!((probe.center.x2 - (1.0 - offset)).abs() < 1e-15);
        assert!((probe.radius - 0.1).abs() < 1e-15);
        assert!((l.distance_to_boundary(probe.center).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn probe_containment() {
        let square = Domain::unit_square();
        let inside = ProbeDisc::new(Point2::new(0.5, 0.5), 0.4).unwrap();
        assert!(square.check_probe(&inside).is_ok());
        let touching = ProbeDisc::new(Point2::new(0.5, 0.5), 0.5).unwrap();
        assert!(square.check_probe(&touching).is_err());
        assert!(square.disc_mean_distance(&touching, 8, 16).is_err());
        assert!(square.disc_mean_distance(&inside, 3, 16).is_err());
    }
}
