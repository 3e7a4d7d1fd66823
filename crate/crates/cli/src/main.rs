use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use saddlepoint::torsion::Scheme;
use saddlepoint_cli::{cmd_bench, cmd_solve, cmd_verify, render_csv, RunManifest, VerifyOptions};

#[derive(Parser)]
#[command(name = "saddle", version, about = "Primal-dual solvers for the torsion-rod design problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one manifest and write history.csv, summary.json and optional fields.
    Solve { manifest: PathBuf },
    /// Sweep schemes and sizes; prints a CSV table and writes bench.csv.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "es,is,iss")]
        schemes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "101,201")]
        sizes: Vec<usize>,
        manifest: PathBuf,
    },
    /// Run the self-check suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Suites to leave out (comma separated).
        #[arg(long, value_delimiter = ',')]
        skip: Vec<String>,
        #[arg(long, hide = true)]
        mutate_divergence: bool,
    },
}

fn load(path: &Path) -> anyhow::Result<RunManifest> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RunManifest::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Solve { manifest } => {
            let row = cmd_solve(&load(&manifest)?)?;
            println!(
                "{} N={}: converged in {} iterations, residual {:e}, {:.2}s",
                row.scheme, row.n, row.iterations, row.final_residual, row.wall_time
            );
            Ok(true)
        }
        Command::Bench { schemes, sizes, manifest } => {
            let base = load(&manifest)?;
            let schemes = schemes
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Scheme>())
                .collect::<Result<Vec<_>, _>>()?;
            let entries = cmd_bench(&schemes, &sizes, &base)?;
            let csv = render_csv(&entries);
            std::fs::create_dir_all(&base.output_dir)?;
            std::fs::write(base.output_dir.join("bench.csv"), &csv)?;
            print!("{csv}");
            for e in &entries {
                if let Err(msg) = &e.outcome {
                    eprintln!("N={} {}: {msg}", e.n, e.scheme);
                }
            }
            Ok(true)
        }
        Command::Verify { seed, skip, mutate_divergence } => {
            let outcomes = cmd_verify(&VerifyOptions { seed, skip, mutate_divergence });
            for o in &outcomes {
                println!("{}", o.line());
            }
            Ok(outcomes.iter().all(|o| o.passed()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
