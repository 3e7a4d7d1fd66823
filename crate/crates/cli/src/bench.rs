use std::fmt::Write as _;
use std::sync::Mutex;

use saddlepoint::torsion::{run_scheme, Scheme};

use crate::manifest::RunManifest;
use crate::solve::BenchRow;

/// Sizes above this trigger a warning.
pub const DESK_SCALE_LIMIT: usize = 501;

pub const CSV_HEADER: &str =
    "N,scheme,iterations,wall_time,final_residual,primal_energy,dual_energy,termination,es_is_ratio,is_iss_ratio,error";

#[derive(Debug, Clone)]
pub struct BenchEntry {
    pub n: usize,
    pub scheme: Scheme,
    pub outcome: Result<BenchRow, String>,
}

/// Worker count: `SADDLE_THREADS` if set, else the available parallelism.
pub fn worker_count(jobs: usize) -> usize {
    let cap = std::env::var("SADDLE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    cap.min(jobs).max(1)
}

fn run_one(base: &RunManifest, n: usize, scheme: Scheme) -> Result<BenchRow, String> {
    let mut m = base.clone();
    m.n = n;
    m.scheme = scheme.label().to_ascii_lowercase();
    let config = m.to_config().map_err(|e| e.to_string())?;
    let result = run_scheme(&config).map_err(|e| e.to_string())?;
    Ok(BenchRow::from_result(&m, scheme.label(), &result))
}

/// Runs every (size, scheme) pair. Rows come back sorted by N then scheme
/// whatever order the workers finish in.
pub fn cmd_bench(schemes: &[Scheme], sizes: &[usize], base: &RunManifest) -> anyhow::Result<Vec<BenchEntry>> {
    anyhow::ensure!(!schemes.is_empty(), "no schemes given");
    anyhow::ensure!(!sizes.is_empty(), "no sizes given");
    for &n in sizes {
        if n > DESK_SCALE_LIMIT {
            eprintln!("warning: N={n} is above {DESK_SCALE_LIMIT}; expect long run times");
        }
    }
    let mut jobs: Vec<(usize, Scheme)> = Vec::new();
    for &n in sizes {
        for &s in schemes {
            if !jobs.contains(&(n, s)) {
                jobs.push((n, s));
            }
        }
    }
    jobs.sort();

    let queue = Mutex::new(jobs.clone().into_iter());
    let done = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|scope| {
        for _ in 0..worker_count(jobs.len()) {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().next();
                let Some((n, scheme)) = next else { break };
                let outcome = run_one(base, n, scheme);
                done.lock().unwrap().push(BenchEntry { n, scheme, outcome });
            });
        }
    });
    let mut entries = done.into_inner().unwrap();
    entries.sort_by_key(|e| (e.n, e.scheme));
    Ok(entries)
}

fn iterations(entries: &[BenchEntry], n: usize, scheme: Scheme) -> Option<usize> {
    entries
        .iter()
        .find(|e| e.n == n && e.scheme == scheme)
        .and_then(|e| e.outcome.as_ref().ok())
        .filter(|r| r.converged())
        .map(|r| r.iterations)
}

fn ratio(a: Option<usize>, b: Option<usize>) -> String {
    match (a, b) {
        (Some(a), Some(b)) if b > 0 => format!("{:.3}", a as f64 / b as f64),
        _ => String::new(),
    }
}

pub fn render_csv(entries: &[BenchEntry]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for e in entries {
        let es_is = ratio(iterations(entries, e.n, Scheme::Explicit), iterations(entries, e.n, Scheme::Implicit));
        let is_iss = ratio(
            iterations(entries, e.n, Scheme::Implicit),
            iterations(entries, e.n, Scheme::ImplicitSubiterated),
        );
        let _ = match &e.outcome {
            Ok(r) => writeln!(
                s,
                "{},{},{},{:.3},{:e},{:e},{:e},{},{es_is},{is_iss},",
                r.n, r.scheme, r.iterations, r.wall_time, r.final_residual, r.primal_energy, r.dual_energy, r.termination
            ),
            Err(msg) => writeln!(s, "{},{},,,,,,failed,{es_is},{is_iss},\"{}\"", e.n, e.scheme, msg.replace('"', "'")),
        };
    }
    s
}
