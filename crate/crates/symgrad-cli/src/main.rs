//! Batch experiment runner: subcommand dispatch, configuration handling,
//! deterministic seeding, and report serialization.

mod commands;
mod config;
mod output;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use config::Config;
use output::{write_outputs, Formats, JsonReport, Timing};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "symgrad",
    about = "Experiments on symmetric-gradient power-law systems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Random seed (the SYMGRAD_SEED environment variable wins).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for data files and the JSON report.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Comma-separated output formats: csv|json|plot.
    #[arg(long, global = true, default_value = "csv,json")]
    format: String,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Scalar-law inequality battery (index windows, Young bounds, uniform
    /// convergence of the regularized family).
    Battery,
    /// Pointwise identity residuals over random polynomial fields.
    Identities,
    /// Reduced inequalities, the planar quadratic-form claim, and its
    /// matrix spectrum.
    Inequalities,
    /// Admissible exponent thresholds per dimension.
    Table1,
    /// One Dirichlet solve with pinch continuation.
    Solve,
    /// Stability of the empirical local-estimate constant across
    /// refinements and exponents.
    Estimate,
    /// Singular threshold scan for the shear solution.
    Example1,
    /// Discrete translation seminorm of the shear strain.
    Nikolskii,
    /// Manufactured-solution convergence rates.
    Convergence,
    /// Korn and Poincare ratios for random zero-boundary fields.
    Korn,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Battery => "battery",
            Command::Identities => "identities",
            Command::Inequalities => "inequalities",
            Command::Table1 => "table1",
            Command::Solve => "solve",
            Command::Estimate => "estimate",
            Command::Example1 => "example1",
            Command::Nikolskii => "nikolskii",
            Command::Convergence => "convergence",
            Command::Korn => "korn",
        }
    }
}

fn run() -> Result<bool> {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    // precedence: config file < --seed < SYMGRAD_SEED
    if let Some(seed) = cli.seed {
        cfg.set("seed", seed.to_string());
    }
    if let Ok(env_seed) = std::env::var("SYMGRAD_SEED") {
        let parsed: u64 = env_seed
            .parse()
            .map_err(|_| anyhow::anyhow!("SYMGRAD_SEED is not an integer: {env_seed:?}"))?;
        cfg.set("seed", parsed.to_string());
    }
    cfg.get_u64("seed", 0)?; // every run records its effective seed

    let formats = Formats::parse(&cli.format)?;
    let start = Instant::now();
    let out = match cli.command {
        Command::Battery => commands::battery(&cfg)?,
        Command::Identities => commands::identities(&cfg)?,
        Command::Inequalities => commands::inequalities(&cfg)?,
        Command::Table1 => commands::table1(&cfg)?,
        Command::Solve => commands::solve(&cfg)?,
        Command::Estimate => commands::estimate(&cfg)?,
        Command::Example1 => commands::example1(&cfg)?,
        Command::Nikolskii => commands::nikolskii(&cfg)?,
        Command::Convergence => commands::convergence(&cfg)?,
        Command::Korn => commands::korn(&cfg)?,
    };
    let unused = cfg.unused_keys();
    if !unused.is_empty() {
        bail!("unknown config keys for `{}`: {}", cli.command.name(), unused.join(", "));
    }

    let report = JsonReport {
        config: cfg.effective_map(),
        checks: out.checks.clone(),
        timing: Timing { wall_ms: start.elapsed().as_millis() },
    };
    write_outputs(&cli.out, cli.command.name(), &out.files, &report, formats)?;

    for check in &out.checks.checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {} (margin {:+.3e}, tol {:.1e}) {}",
            check.name, check.margin, check.tolerance, check.details
        );
    }
    let failures = out.checks.failures().len();
    println!(
        "{}: {} checks, {} failed, outputs in {}",
        cli.command.name(),
        out.checks.checks.len(),
        failures,
        cli.out.display()
    );
    Ok(out.checks.all_pass())
}

fn main() {
    match run() {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
