//! Batch front-end for the fermion-mediated interaction pipeline.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "rkky",
    version,
    about = "Tunable fermion-mediated long-range interactions: trap spectra, RKKY-type kernels, lattice couplings and hardcore-boson chain scans"
)]
struct Cli {
    /// Declarative TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads; defaults to RKKY_THREADS or all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override a config key, e.g. --set vp_ratio=400 (repeatable).
    #[arg(long = "set", global = true)]
    sets: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the 1D trap spectrum and export energies.
    Spectrum,
    /// Compute a mediated kernel with oscillation maxima and a Yukawa fit.
    Kernel,
    /// Project a kernel onto lattice couplings v_1..v_R.
    Couplings,
    /// Scan coupling ratios v2/v1, v3/v1 over (vp_ratio, k_F d).
    ScanRatios,
    /// Diagonalize one hardcore-boson chain and export observables.
    Chain,
    /// Scan chain observables over coupling tables from the 1D pipeline.
    ScanPhase,
    /// Dimensional-crossover kernels, cosine transforms and beat markers.
    Crossover,
    /// Kagome couplings over (anisotropy/N, k_F d) with frustration search.
    Kagome,
}

#[derive(Debug)]
pub struct AppError {
    kind: &'static str,
    message: String,
    exit_code: i32,
}

impl AppError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: "config",
            message: message.into(),
            exit_code: 2,
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            kind: "numeric",
            message: message.into(),
            exit_code: 3,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: "io",
            message: message.into(),
            exit_code: 3,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

fn thread_count(cli: &Cli) -> Option<usize> {
    cli.threads.or_else(|| {
        std::env::var("RKKY_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    })
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = thread_count(&cli) {
        if n >= 1 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let result = run(&cli);
    if let Err(e) = result {
        let payload = serde_json::json!({
            "error": { "kind": e.kind, "message": e.message }
        });
        eprintln!("{payload}");
        std::process::exit(e.exit_code);
    }
}

fn run(cli: &Cli) -> Result<(), AppError> {
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| AppError::config(format!("output dir {}: {e}", cli.out.display())))?;
    let table = config::load_table(cli.config.as_deref(), &cli.sets)?;
    match cli.command {
        Command::Spectrum => commands::spectrum::run(table, &cli.out),
        Command::Kernel => commands::kernel::run(table, &cli.out),
        Command::Couplings => commands::couplings::run(table, &cli.out),
        Command::ScanRatios => commands::scan_ratios::run(table, &cli.out),
        Command::Chain => commands::chain::run(table, &cli.out),
        Command::ScanPhase => commands::scan_phase::run(table, &cli.out),
        Command::Crossover => commands::crossover::run(table, &cli.out),
        Command::Kagome => commands::kagome::run(table, &cli.out),
    }
}
