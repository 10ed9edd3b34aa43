use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand};
use flipwalk_experiments::{failures, render, run_suite, write_outputs, ExperimentConfig, Format, ResultRow, Suite};

#[derive(Parser)]
#[command(name = "flipwalk", about = "Verification suites for the triangulation flip walk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run a single n.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Upper end of the n range.
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Random samples per check (suite default when omitted).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Output directory; rows go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Raise the per-suite size cap.
    #[arg(long, global = true)]
    cap_override: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Catalan counts against exhaustive enumeration
    Enumerate,
    /// Spectral gaps and the growth-rate fit
    Spectral,
    /// Pinning and coefficient lemmas, decomposition identities
    Lemmas,
    /// Transport flows between central blocks
    Flows,
    /// Dual-tree depth samples and pinning averages
    Depth,
    /// Exact mixing times against spectral and log-Sobolev bounds
    Mixing,
    /// Every suite in order
    All,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("FLIPWALK_THREADS") {
        let t: usize = t.parse().context("FLIPWALK_THREADS must be a positive integer")?;
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let cfg = ExperimentConfig {
        n: cli.n,
        n_max: cli.n_max,
        seed: cli.seed,
        samples: cli.samples,
        cap_override: cli.cap_override,
        out: cli.out.clone(),
        format: cli.format,
    };
    let suites: Vec<Suite> = match cli.command {
        Command::Enumerate => vec![Suite::Enumerate],
        Command::Spectral => vec![Suite::Spectral],
        Command::Lemmas => vec![Suite::Lemmas],
        Command::Flows => vec![Suite::Flows],
        Command::Depth => vec![Suite::Depth],
        Command::Mixing => vec![Suite::Mixing],
        Command::All => Suite::ALL.to_vec(),
    };
    let mut rows: Vec<ResultRow> = Vec::new();
    for s in suites {
        let t = Instant::now();
        let part = run_suite(s, &cfg)?;
        for r in &part {
            if !r.wall_time.is_zero() {
                eprintln!("[{}] {} {}: {:.3}s", s.id(), r.experiment, serde_json::to_string(&r.params)?, r.wall_time.as_secs_f64());
            }
        }
        eprintln!("[{}] {} rows in {:.3}s", s.id(), part.len(), t.elapsed().as_secs_f64());
        rows.extend(part);
    }
    let files = render(&rows, cfg.format)?;
    match &cfg.out {
        Some(dir) => write_outputs(dir, &files)?,
        None => {
            for (name, text) in &files {
                if !name.ends_with(".dat") {
                    print!("{text}");
                }
            }
        }
    }
    let failed = failures(&rows);
    for r in &failed {
        eprintln!("FAILED {} {}", r.experiment, serde_json::to_string(r)?);
    }
    Ok(if failed.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
