//! Reading a domain from JSON and writing the report tables.

use panharmonic::analysis::{convexity_sweep, probe_corners};
use panharmonic::io::{domain_to_json, margins_csv, parse_domain, probes_csv};

const ARROW: &str = r#"{
  "type": "polygon",
  "vertices": [[0, 0], [2, 1], [0, 2], [0.6, 1]]
}"#;

fn main() -> panharmonic::Result<()> {
    let domain = parse_domain(ARROW)?;
    print!("parsed: {}\nround trip: {}", domain.describe(), domain_to_json(&domain));
    println!("reentrant corners: {:?}", domain.reentrant_corners());

    let report = convexity_sweep(&domain, &[4.0, 8.0], 0.05)?;
    println!("verdict: {}\n\nmargins.csv\n{}", report.verdict, margins_csv(&report));
    println!("probes.csv\n{}", probes_csv(&probe_corners(&domain, 0.8)?));

    if let Err(e) = parse_domain(r#"{"type": "disc", "center": [0, 0]}"#) {
        println!("rejected: {e}");
    }
    Ok(())
}
