use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2, ProbeDisc};

pub const PROBE_RADIAL_ORDER: usize = 32;
pub const PROBE_ANGULAR_ORDER: usize = 512;

/// A probe is flagged when its disc mean exceeds the centre value by more
/// than this.
pub const VIOLATION_TOL: f64 = 1e-6;

/// Default `r` for the corner construction, as a fraction of the corner's
/// clearance from non-incident edges.
pub const CORNER_FRACTION: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeResult {
    pub probe: ProbeDisc,
    pub mean: f64,
    pub center_value: f64,
    pub violated: bool,
    /// Polygon vertex the probe was built at, for corner probes.
    pub corner: Option<usize>,
}

impl ProbeResult {
    pub fn excess(&self) -> f64 {
        self.mean - self.center_value
    }
}

/// Compares the disc average of the distance function with its value at the
/// centre. A superharmonic function never has `mean > center`.
pub fn superharmonicity_probe(domain: &Domain, probes: &[ProbeDisc]) -> Result<Vec<ProbeResult>> {
    probes
        .iter()
        .map(|probe| {
            let mean = domain.disc_mean_distance(probe, PROBE_RADIAL_ORDER, PROBE_ANGULAR_ORDER)?;
            let center_value = domain.distance_to_boundary(probe.center)?;
            Ok(ProbeResult {
                probe: *probe,
                mean,
                center_value,
                violated: mean > center_value + VIOLATION_TOL,
                corner: None,
            })
        })
        .collect()
}

/// One corner probe per reentrant vertex, with `r = fraction * clearance`.
pub fn corner_probes(domain: &Domain, fraction: f64) -> Result<Vec<(usize, ProbeDisc)>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("corner fraction must lie in (0, 1), got {fraction}")));
    }
    domain
        .reentrant_corners()
        .into_iter()
        .map(|i| {
            let r = fraction * domain.corner_clearance(i)?;
            Ok((i, domain.canonical_probe(i, r)?))
        })
        .collect()
}

pub fn probe_corners(domain: &Domain, fraction: f64) -> Result<Vec<ProbeResult>> {
    let probes = corner_probes(domain, fraction)?;
    let discs: Vec<ProbeDisc> = probes.iter().map(|&(_, p)| p).collect();
    let mut results = superharmonicity_probe(domain, &discs)?;
    for (r, &(i, _)) in results.iter_mut().zip(&probes) {
        r.corner = Some(i);
    }
    Ok(results)
}

/// `count` probes with uniformly drawn interior centres and radii in
/// `(0, d(center) / 2]`, reproducible from `seed`.
pub fn random_probes(domain: &Domain, count: usize, seed: u64) -> Result<Vec<ProbeDisc>> {
    let points = match domain {
        Domain::Polygon { vertices } => vertices.clone(),
        Domain::Disc { center, radius } => vec![
            *center + Point2::new(-radius, -radius),
            *center + Point2::new(*radius, *radius),
        ],
    };
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in &points {
        lo = Point2::new(lo.x1.min(p.x1), lo.x2.min(p.x2));
        hi = Point2::new(hi.x1.max(p.x1), hi.x2.max(p.x2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes = Vec::with_capacity(count);
    while probes.len() < count {
        let c = Point2::new(rng.gen_range(lo.x1..hi.x1), rng.gen_range(lo.x2..hi.x2));
        if !domain.contains_point(c) {
            continue;
        }
        let d = domain.boundary_distance(c);
        let radius = 0.5 * d * (1.0 - rng.gen::<f64>());
        if radius > 0.0 {
            probes.push(ProbeDisc::new(c, radius)?);
        }
    }
    Ok(probes)
}
