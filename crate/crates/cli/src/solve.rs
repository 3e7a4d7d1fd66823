use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use saddlepoint::saddle::Termination;
use saddlepoint::torsion::{residual, run_scheme, TorsionResult};
use serde::Serialize;

use crate::manifest::RunManifest;

/// One solver run as reported in `summary.json` and in bench tables.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub iterations: usize,
    /// Seconds.
    pub wall_time: f64,
    pub final_residual: f64,
    pub primal_energy: f64,
    pub dual_energy: f64,
    pub termination: String,
}

impl BenchRow {
    pub fn from_result(manifest: &RunManifest, scheme: &str, result: &TorsionResult) -> Self {
        let report = &result.report;
        Self {
            scheme: scheme.to_string(),
            n: manifest.n,
            iterations: report.iterations,
            wall_time: report.wall_time,
            final_residual: report
                .final_residual()
                .unwrap_or_else(|| residual(&result.p, manifest.lambda)),
            primal_energy: result.primal_energy_history.last().copied().unwrap_or(0.0),
            dual_energy: result.dual_energy_history.last().copied().unwrap_or(0.0),
            termination: report.termination.as_str().to_string(),
        }
    }

    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged.as_str()
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    #[serde(flatten)]
    row: &'a BenchRow,
    alpha: f64,
    beta: f64,
    config: &'a RunManifest,
}

pub fn write_history(path: &Path, result: &TorsionResult) -> anyhow::Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "iter,residual,primal_energy,dual_energy")?;
    let r = &result.report.residual_history;
    for (i, ((res, pe), de)) in r
        .iter()
        .zip(&result.primal_energy_history)
        .zip(&result.dual_energy_history)
        .enumerate()
    {
        writeln!(out, "{},{res:e},{pe:e},{de:e}", i + 1)?;
    }
    out.flush()?;
    Ok(())
}

/// Runs the manifest and writes its artifacts. Non-convergence is an error
/// reported after the artifacts are on disk.
pub fn cmd_solve(manifest: &RunManifest) -> anyhow::Result<BenchRow> {
    let config = manifest.to_config()?;
    let result = run_scheme(&config)?;
    let dir = &manifest.output_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let row = BenchRow::from_result(manifest, config.scheme.label(), &result);
    write_history(&dir.join("history.csv"), &result)?;
    let summary = Summary { row: &row, alpha: result.steps.alpha, beta: result.steps.beta, config: manifest };
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    if manifest.emit_fields {
        fs::write(dir.join("u.field"), result.u.to_text())?;
        fs::write(dir.join("p.field"), result.p.to_text())?;
    }

    match result.report.termination {
        Termination::Converged => Ok(row),
        Termination::Diverged => anyhow::bail!("run diverged after {} iterations", row.iterations),
        Termination::MaxIters => anyhow::bail!(
            "iteration budget of {} exhausted (residual {:e})",
            config.max_outer_iters,
            row.final_residual
        ),
    }
}
