//! `subdiff`: run a named experiment from a TOML config and report pass/fail
//! through the exit code (0 pass, 1 tolerance failure, 2 config error,
//! 3 internal error).

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use subdiff_core::harness::{run_experiment, ExperimentConfig, ExperimentKind, RunOptions};
use subdiff_core::Error;

#[derive(Parser)]
#[command(
    name = "subdiff",
    version,
    about = "Cross-validates simulated anomalous-diffusion processes against \
             distributed-order fractional solvers",
    after_help = "Experiment kinds: subordinator-check, inverse-moments, mc-vs-pde, \
                  dode-two-atom, stable-driver, feynman-kac, solver-convergence.\n\
                  SUBDIFF_WORKERS sets the default worker count when --workers is absent."
)]
struct Cli {
    /// Experiment kind; must match the `kind` field of the config file.
    kind: String,

    /// Path to the TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,

    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the config's path count.
    #[arg(long)]
    paths: Option<usize>,

    /// Output directory for report.json and CSV artifacts.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker thread count (default: SUBDIFF_WORKERS, then all cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn run(cli: Cli) -> Result<bool, Error> {
    let kind = ExperimentKind::parse(&cli.kind)?;
    let text = std::fs::read_to_string(&cli.config).map_err(|e| {
        Error::Config(format!("cannot read config {}: {e}", cli.config.display()))
    })?;
    let cfg = ExperimentConfig::from_toml(&text)?;
    if cfg.kind != kind {
        return Err(Error::Config(format!(
            "command asks for '{}' but the config file declares kind '{}'",
            kind.as_str(),
            cfg.kind.as_str()
        )));
    }
    let workers = cli.workers.or_else(|| {
        std::env::var("SUBDIFF_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    let report = run_experiment(
        &cfg,
        &RunOptions {
            seed: cli.seed,
            n_paths: cli.paths,
            out_dir: cli.out,
            workers,
        },
    )?;
    for check in &report.checks {
        println!(
            "{} {}: value {:.6e}, target {:.6e}, tolerance {:.2e}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.value,
            check.target,
            check.tolerance
        );
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!(
        "{}: {} in {:.2}s (seed {}, {} paths)",
        report.experiment,
        if report.passed { "all checks passed" } else { "CHECKS FAILED" },
        report.runtime_seconds,
        report.seed,
        report.n_paths
    );
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Config(_) | Error::Domain(_))) => {
            eprintln!("configuration error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("internal error: {e}");
            ExitCode::from(3)
        }
    }
}
