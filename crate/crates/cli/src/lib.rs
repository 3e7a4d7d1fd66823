//! Library side of the `saddle` command: manifests, single runs, benchmark
//! sweeps and self-check suites.

pub mod bench;
pub mod manifest;
pub mod solve;
pub mod verify;

pub use bench::{cmd_bench, render_csv, BenchEntry};
pub use manifest::{ManifestError, RunManifest};
pub use solve::{cmd_solve, BenchRow};
pub use verify::{cmd_verify, SuiteOutcome, VerifyOptions};
