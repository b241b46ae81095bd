//! The `panharmonic` command line.
//!
//! Exit status is 0 on success, 1 when a pipeline fails (or a sweep is
//! truncated by the triangle budget) and 2 for configuration errors such as
//! malformed domain files or out-of-range flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::analysis::sweep::{base_mesh, resolve_mesh};
use crate::analysis::{
    convexity_sweep_with, geometric_mu_list, probe_corners, random_probes, superharmonicity_probe, varadhan_error,
    Collocation, SweepOptions, TargetH,
};
use crate::error::Error;
use crate::geometry::Domain;
use crate::io::{load_domain, margins_csv, probes_csv, varadhan_csv};
use crate::solver::{solve_dirichlet, solve_neumann};
use crate::validation::run_validation;

#[derive(Debug, Parser)]
#[command(name = "panharmonic", version, about = "Modified Helmholtz solutions as a convexity test for planar domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve once and dump the nodal field and the mesh.
    Solve(SolveArgs),
    /// Sup error of -ln(v)/mu against the distance function, per mu.
    Varadhan(SweepArgs),
    /// Check |grad v| <= mu v over a mu sweep and write a report.
    CheckConvexity(SweepArgs),
    /// Compare disc averages of the distance function with centre values.
    ProbeSuperharmonic(ProbeArgs),
    /// Run the built-in analytic checks.
    Validate,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long)]
    pub mu: f64,
    /// Mesh size, or `auto` for 0.5 / mu.
    #[arg(long, default_value = "auto")]
    pub target_h: TargetH,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
    /// Use the flux condition dv/dn = mu instead of v = 1.
    #[arg(long)]
    pub neumann: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub domain: PathBuf,
    /// Explicit mu values (ascending); overrides the geometric sweep.
    #[arg(long, num_args = 1.., conflicts_with = "mu_start")]
    pub mu: Vec<f64>,
    #[arg(long)]
    pub mu_start: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub mu_factor: f64,
    #[arg(long, default_value_t = 4)]
    pub mu_count: usize,
    /// Mesh size, or `auto` for 0.5 / max mu.
    #[arg(long, default_value = "auto")]
    pub target_h: TargetH,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
    /// Add the exploratory flux-boundary computation.
    #[arg(long)]
    pub neumann: bool,
    /// Decay fraction for the fitted constant in v <= C exp(-mu (1 - rho) d).
    #[arg(long, default_value_t = 0.25)]
    pub rho: f64,
    #[arg(long, value_enum, default_value_t = Collocation::VertexMean)]
    pub collocation: Collocation,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub domain: PathBuf,
    #[arg(long, default_value = ".")]
    pub output_dir: PathBuf,
    /// Random interior probes in addition to the reentrant-corner probes.
    #[arg(long, default_value_t = 0)]
    pub probe_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corner construction size as a fraction of the corner clearance.
    #[arg(long, default_value_t = 0.8)]
    pub corner_fraction: f64,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Pipeline(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Pipeline(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidDomain(_) | Error::DegeneratePolygon(_) | Error::OutOfRange(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Pipeline(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn config<T>(ok: bool, value: T, message: impl FnOnce() -> String) -> CliResult<T> {
    if ok {
        Ok(value)
    } else {
        Err(CliError::Config(message()))
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::Pipeline(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Pipeline(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn mu_list(args: &SweepArgs) -> CliResult<Vec<f64>> {
    let list = if !args.mu.is_empty() {
        args.mu.clone()
    } else {
        let start = args.mu_start.ok_or_else(|| CliError::Config("give --mu or --mu-start".into()))?;
        geometric_mu_list(start, args.mu_factor, args.mu_count).map_err(|e| CliError::Config(e.to_string()))?
    };
    let ascending = list.iter().all(|&m| m > 0.0 && m.is_finite()) && list.windows(2).all(|w| w[0] < w[1]);
    config(ascending, list, || "mu values must be positive and strictly ascending".into())
}

fn load(path: &Path) -> CliResult<Domain> {
    load_domain(path).map_err(|e| CliError::Config(e.to_string()))
}

fn run_solve(args: &SolveArgs) -> CliResult<()> {
    config(args.mu > 0.0 && args.mu.is_finite(), (), || format!("--mu must be positive, got {}", args.mu))?;
    let domain = load(&args.domain)?;
    let (base, _) = base_mesh(&domain, args.target_h, args.mu)?;
    let mesh = resolve_mesh(&Arc::new(base), &domain, args.mu)?;
    let field = if args.neumann {
        solve_neumann(Arc::clone(&mesh), args.mu)?
    } else {
        solve_dirichlet(Arc::clone(&mesh), args.mu)?
    };
    for w in &field.warnings {
        eprintln!("warning: {w}");
    }
    let f = write(&args.output_dir, "field.txt", &field.to_text())?;
    let m = write(&args.output_dir, "mesh.txt", &mesh.to_text())?;
    println!(
        "solved mu = {} on {} nodes / {} triangles (h_max {:.4e}); v in [{:.6e}, {:.6e}]",
        args.mu,
        mesh.num_nodes(),
        mesh.num_triangles(),
        mesh.h_max(),
        field.min_value(),
        field.max_value()
    );
    println!("wrote {} and {}", f.display(), m.display());
    Ok(())
}

fn run_varadhan(args: &SweepArgs) -> CliResult<()> {
    let domain = load(&args.domain)?;
    let mus = mu_list(args)?;
    let (base, _) = base_mesh(&domain, args.target_h, *mus.last().unwrap())?;
    let base = Arc::new(base);
    let mut results = Vec::with_capacity(mus.len());
    for &mu in &mus {
        let mesh = resolve_mesh(&base, &domain, mu)?;
        let field = if args.neumann { solve_neumann(mesh, mu)? } else { solve_dirichlet(mesh, mu)? };
        let r = varadhan_error(&field, &domain)?;
        println!(
            "mu = {mu}: sup |-ln(v)/mu - d| = {:.6e} at ({:.4}, {:.4})",
            r.sup_error, r.error_location.x1, r.error_location.x2
        );
        results.push(r);
    }
    if args.neumann {
        println!("note: flux-boundary results are exploratory");
    }
    let path = write(&args.output_dir, "varadhan.csv", &varadhan_csv(&results))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_check(args: &SweepArgs) -> CliResult<()> {
    config(args.rho > 0.0 && args.rho < 0.5, (), || format!("--rho must lie in (0, 1/2), got {}", args.rho))?;
    let domain = load(&args.domain)?;
    let mus = mu_list(args)?;
    let options =
        SweepOptions { target_h: args.target_h, collocation: args.collocation, neumann: args.neumann, rho: args.rho };
    let report = convexity_sweep_with(&domain, &mus, &options)?;
    write(&args.output_dir, "report.json", &report.to_json())?;
    write(&args.output_dir, "margins.csv", &margins_csv(&report))?;
    let varadhan: Vec<_> = report.entries.iter().map(|e| e.varadhan.clone()).collect();
    write(&args.output_dir, "varadhan.csv", &varadhan_csv(&varadhan))?;
    for e in &report.entries {
        let c = &e.condition;
        println!(
            "mu = {:<8} min margin {:>+.6e} at ({:.4}, {:.4})  sup Varadhan error {:.4e}",
            e.mu, c.min_margin, c.argmin_centroid.x1, c.argmin_centroid.x2, e.varadhan.sup_error
        );
    }
    println!("verdict: {}", report.verdict);
    for note in &report.notes {
        println!("  {note}");
    }
    println!("wrote report.json, margins.csv and varadhan.csv to {}", args.output_dir.display());
    if report.truncated {
        return Err(CliError::Pipeline("sweep truncated by the triangle budget".into()));
    }
    Ok(())
}

fn run_probe(args: &ProbeArgs) -> CliResult<()> {
    let domain = load(&args.domain)?;
    config(args.corner_fraction > 0.0 && args.corner_fraction < 1.0, (), || {
        format!("--corner-fraction must lie in (0, 1), got {}", args.corner_fraction)
    })?;
    let mut results = probe_corners(&domain, args.corner_fraction)?;
    let random = random_probes(&domain, args.probe_count, args.seed)?;
    results.extend(superharmonicity_probe(&domain, &random)?);
    for r in &results {
        println!(
            "probe ({:.4}, {:.4}) r = {:.4}: mean {:.8} centre {:.8} excess {:+.3e}{}",
            r.probe.center.x1,
            r.probe.center.x2,
            r.probe.radius,
            r.mean,
            r.center_value,
            r.excess(),
            if r.violated { "  VIOLATED" } else { "" }
        );
    }
    let violated = results.iter().filter(|r| r.violated).count();
    println!("{violated} of {} probes violate the mean-value inequality", results.len());
    let path = write(&args.output_dir, "probes.csv", &probes_csv(&results))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_validate() -> CliResult<()> {
    let checks = run_validation()?;
    let mut failed = 0;
    for c in &checks {
        println!("{} {:<32} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        failed += usize::from(!c.passed);
    }
    if failed > 0 {
        return Err(CliError::Pipeline(format!("{failed} of {} checks failed", checks.len())));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Varadhan(a) => run_varadhan(a),
        Command::CheckConvexity(a) => run_check(a),
        Command::ProbeSuperharmonic(a) => run_probe(a),
        Command::Validate => run_validate(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Config(m) => eprintln!("configuration error: {m}"),
                CliError::Pipeline(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
