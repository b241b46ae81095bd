//! Disc averages of the distance function against its centre value.
//!
//! At a reentrant corner the distance function is locally `|x - corner|`,
//! which is subharmonic, so a small disc in the corner's shadow has an average
//! above its centre value. On convex domains that never happens.

use panharmonic::analysis::{probe_corners, random_probes, superharmonicity_probe};
use panharmonic::geometry::{Domain, Point2, ProbeDisc};

fn main() -> panharmonic::Result<()> {
    let l = Domain::l_shape();
    for fraction in [0.4, 0.6, 0.8] {
        for r in probe_corners(&l, fraction)? {
            println!(
                "L corner, r = {fraction}: centre ({:.4}, {:.4}) radius {:.3}  mean - centre = {:+.6}",
                r.probe.center.x1,
                r.probe.center.x2,
                r.probe.radius,
                r.excess()
            );
        }
    }
    let off_bisector = ProbeDisc::new(Point2::new(0.8, 0.8), 0.1)?;
    let r = &superharmonicity_probe(&l, &[off_bisector])?[0];
    println!("L, centre (0.8, 0.8) radius 0.1: mean {:.6} centre {:.6}", r.mean, r.center_value);

    for (name, domain) in [("unit square", Domain::unit_square()), ("hexagon", Domain::regular_polygon(6, 1.0)?)] {
        let results = superharmonicity_probe(&domain, &random_probes(&domain, 200, 1)?)?;
        let worst = results.iter().map(|r| r.excess()).fold(f64::NEG_INFINITY, f64::max);
        println!("{name}: 200 random probes, largest mean - centre = {worst:+.3e}");
    }
    Ok(())
}
