use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use lpdp_core::bench::{self, BenchRow, MIN_REPS};
use lpdp_core::sim::{run_scenario, ScenarioConfig};
use lpdp_core::{selftest, Error};

#[derive(Parser)]
#[command(
    name = "lpdp",
    version,
    about = "Forensic data provision: scenarios, self-test, benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run setup and every protocol phase from a JSON scenario.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Batch versus individual upload verification, as CSV.
    BenchBatch {
        #[arg(long, default_value_t = 64)]
        max_batch: usize,
        #[arg(long, default_value_t = MIN_REPS)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Warrant update versus full issuance, as CSV.
    BenchWarrant {
        #[arg(long, default_value_t = 5)]
        n_wi: usize,
        /// Comma-separated; defaults to 0..=n_wi.
        #[arg(long, value_delimiter = ',')]
        n_u: Vec<usize>,
        #[arg(long, default_value_t = MIN_REPS)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in property checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Bad input from the caller; exits with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: Error) -> anyhow::Error {
    match e {
        Error::Config(_) | Error::Io(_) => Usage(e.to_string()).into(),
        other => other.into(),
    }
}

fn write_rows(rows: &[BenchRow], out: Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            bench::write_csv(rows, file)?;
        }
        None => bench::write_csv(rows, io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, seed } => {
            let mut cfg = ScenarioConfig::load(&config)
                .map_err(usage)
                .with_context(|| format!("loading {}", config.display()))?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_scenario(cfg)?;
            let mut out = io::stdout().lock();
            for line in report.lines() {
                writeln!(out, "{line}")?;
            }
            let anomalies = report.anomalies();
            for a in &anomalies {
                writeln!(out, "FAILED: {a}")?;
            }
            Ok(anomalies.is_empty())
        }
        Command::BenchBatch {
            max_batch,
            reps,
            seed,
            out,
        } => {
            let rows = bench::bench_batch(max_batch, reps, seed).map_err(usage)?;
            write_rows(&rows, out)?;
            Ok(true)
        }
        Command::BenchWarrant {
            n_wi,
            n_u,
            reps,
            seed,
            out,
        } => {
            let n_u = if n_u.is_empty() {
                (0..=n_wi).collect()
            } else {
                n_u
            };
            let rows = bench::bench_warrant(n_wi, &n_u, reps, seed).map_err(usage)?;
            write_rows(&rows, out)?;
            Ok(true)
        }
        Command::Selftest { seed } => {
            let checks = selftest::run(seed);
            let mut out = io::stdout().lock();
            for c in &checks {
                writeln!(
                    out,
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )?;
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
