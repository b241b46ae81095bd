//! File formats: domain JSON in, CSV tables and whitespace text out.
//!
//! A domain file is either
//!
//! ```json
//! {"type": "polygon", "vertices": [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]}
//! ```
//!
//! or `{"type": "disc", "center": [0, 0], "radius": 1}`. Floating-point
//! output uses `{:.16e}` (17 significant digits) so tables round-trip.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{ConvexityReport, ProbeResult, VaradhanResult};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Point2};

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum DomainFile {
    Polygon { vertices: Vec<[f64; 2]> },
    Disc { center: [f64; 2], radius: f64 },
}

/// Parses a domain description, reporting the line and column of syntax
/// errors and the offending field for invalid geometry.
pub fn parse_domain(text: &str) -> Result<Domain> {
    let file: DomainFile = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let msg = strip_position(&full);
        if e.line() == 0 {
            Error::Parse(msg.to_string())
        } else {
            Error::Parse(format!("line {} column {}: {msg}", e.line(), e.column()))
        }
    })?;
    match file {
        DomainFile::Polygon { vertices } => {
            Domain::polygon(vertices.into_iter().map(Point2::from).collect())
                .map_err(|e| Error::Parse(format!("field `vertices`: {e}")))
        }
        DomainFile::Disc { center, radius } => {
            Domain::disc(center.into(), radius).map_err(|e| Error::Parse(format!("field `radius`/`center`: {e}")))
        }
    }
}

fn strip_position(message: &str) -> &str {
    message.rsplit_once(" at line ").map_or(message, |(head, _)| head)
}

pub fn load_domain(path: &Path) -> Result<Domain> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_domain(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn domain_to_json(domain: &Domain) -> String {
    let file = match domain {
        Domain::Polygon { vertices } => DomainFile::Polygon { vertices: vertices.iter().map(|&p| p.into()).collect() },
        Domain::Disc { center, radius } => DomainFile::Disc { center: (*center).into(), radius: *radius },
    };
    serde_json::to_string(&file).expect("domain serializes") + "\n"
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Columns `mu,min_margin,argmin_x,argmin_y,sup_error,resolution_ok`.
pub fn margins_csv(report: &ConvexityReport) -> String {
    let mut out = String::from("mu,min_margin,argmin_x,argmin_y,sup_error,resolution_ok\n");
    for e in &report.entries {
        let c = &e.condition;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(e.mu),
            fmt_f64(c.min_margin),
            fmt_f64(c.argmin_centroid.x1),
            fmt_f64(c.argmin_centroid.x2),
            fmt_f64(e.varadhan.sup_error),
            c.resolution_ok
        )
        .unwrap();
    }
    out
}

pub fn varadhan_csv(results: &[VaradhanResult]) -> String {
    let mut out = String::from("mu,sup_error,error_x,error_y,resolution_ok\n");
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(r.mu),
            fmt_f64(r.sup_error),
            fmt_f64(r.error_location.x1),
            fmt_f64(r.error_location.x2),
            r.resolution_ok
        )
        .unwrap();
    }
    out
}

pub fn probes_csv(results: &[ProbeResult]) -> String {
    let mut out = String::from("center_x,center_y,radius,mean,center_value,excess,violated,corner\n");
    for r in results {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(r.probe.center.x1),
            fmt_f64(r.probe.center.x2),
            fmt_f64(r.probe.radius),
            fmt_f64(r.mean),
            fmt_f64(r.center_value),
            fmt_f64(r.excess()),
            r.violated,
            r.corner.map(|c| c.to_string()).unwrap_or_default()
        )
        .unwrap();
    }
    out
}
