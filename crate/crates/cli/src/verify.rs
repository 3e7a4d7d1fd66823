//! Self-check suites run by `saddle verify`.

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use saddlepoint::grid::{adjointness_gap, Closure, FaceField, GridSpec, ScalarField};
use saddlepoint::helmholtz::{solve, HelmholtzConfig, Preconditioner};
use saddlepoint::projections::{check_monotone, check_pythagorean, Projector};
use saddlepoint::saddle::{run_explicit, QuadraticProblem, RunOptions, SolverState, StepParams, StopRule};
use saddlepoint::semi_implicit::{run_semi_implicit, CgInnerSolver};
use saddlepoint::torsion::{
    dphi_star_eps, extract_radii, grid_for_resolution, regularized_lipschitz, run_scheme, DomainKind, Scheme,
    TorsionConfig,
};

pub const SUITES: [&str; 6] = ["projections", "adjointness", "helmholtz", "seams", "toy-saddles", "disk"];

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Suites to leave out, by name.
    pub skip: Vec<String>,
    /// Negative control: check adjointness against a deliberately wrong
    /// divergence closure.
    pub mutate_divergence: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:<12} worst {:.3e}  tolerance {:.1e}  margin {:+.3e}  {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance,
            self.tolerance - self.worst,
            self.detail
        )
    }
}

fn random_vec(rng: &mut StdRng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

fn projections(rng: &mut StdRng) -> SuiteOutcome {
    let sets = [
        Projector::whole_space(),
        Projector::boxed(vec![-1.0, -0.5, 0.0, -2.0], vec![1.0, 0.5, 2.0, 0.0]).unwrap(),
        Projector::ball(vec![0.3, -0.2, 0.1, 0.0], 1.5).unwrap(),
        Projector::mask_zero(vec![0, 3]),
    ];
    let mut failures = 0usize;
    for p in &sets {
        for _ in 0..2000 {
            let x = random_vec(rng, 4, 4.0);
            let y = random_vec(rng, 4, 4.0);
            let ok = check_monotone(p, &x, &y, 1e-12) && check_pythagorean(p, &x, 1e-12).unwrap_or(false);
            failures += usize::from(!ok);
        }
    }
    SuiteOutcome {
        name: "projections",
        worst: failures as f64,
        tolerance: 0.0,
        detail: format!("{failures} violations in 8000 samples"),
    }
}

fn adjointness(rng: &mut StdRng, closure: Closure) -> SuiteOutcome {
    let mut worst: f64 = 0.0;
    for n in [8, 16, 32] {
        for grid in [GridSpec::unit_square(n).unwrap(), GridSpec::quarter(n).unwrap()] {
            for _ in 0..100 {
                let u = ScalarField::from_values(grid, random_vec(rng, grid.scalar_len(), 1.0)).unwrap();
                let p = FaceField::from_flat(grid, &random_vec(rng, grid.face_len(), 1.0)).unwrap();
                worst = worst.max(adjointness_gap(&u, &p, closure));
            }
        }
    }
    SuiteOutcome { name: "adjointness", worst, tolerance: 1e-13, detail: "600 pairs, N in {8,16,32}".into() }
}

/// Five-point `I − Δ` with Dirichlet ghost cells, assembled entry by entry.
fn assembled_helmholtz(n: usize, h: f64) -> DMatrix<f64> {
    let inv = 1.0 / (h * h);
    let mut m = DMatrix::identity(n * n, n * n);
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            for (di, dj) in [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)] {
                let (ii, jj) = (i as isize + di, j as isize + dj);
                if ii < 0 || jj < 0 || ii >= n as isize || jj >= n as isize {
                    m[(k, k)] += 2.0 * inv;
                } else {
                    m[(k, k)] += inv;
                    m[(k, jj as usize * n + ii as usize)] -= inv;
                }
            }
        }
    }
    m
}

fn helmholtz(rng: &mut StdRng) -> SuiteOutcome {
    let grid = GridSpec::unit_square(9).unwrap();
    let rhs = ScalarField::from_values(grid, random_vec(rng, 81, 1.0)).unwrap();
    let dense = assembled_helmholtz(9, grid.h()).lu().solve(&DVector::from_vec(rhs.values.clone()));
    let mut worst: f64 = f64::INFINITY;
    if let Some(want) = dense {
        worst = 0.0;
        for pre in [Preconditioner::None, Preconditioner::Multigrid] {
            let cfg = HelmholtzConfig { rel_tolerance: 1e-13, preconditioner: pre, ..HelmholtzConfig::new(grid) };
            match solve(&cfg, &rhs) {
                Ok(got) => {
                    for (a, b) in got.field.values.iter().zip(want.iter()) {
                        worst = worst.max((a - b).abs());
                    }
                }
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    SuiteOutcome { name: "helmholtz", worst, tolerance: 1e-9, detail: "N=9 against a dense LU solve".into() }
}

fn seams(rng: &mut StdRng) -> SuiteOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let eps = rng.gen_range(0.005..0.5);
        let lg = regularized_lipschitz(eps);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let dir = [theta.cos(), theta.sin()];
        for r in [1.0 - eps / 2.0, 1.0 + eps / 2.0] {
            let a = dphi_star_eps([(r - 1e-10) * dir[0], (r - 1e-10) * dir[1]], eps);
            let b = dphi_star_eps([(r + 1e-10) * dir[0], (r + 1e-10) * dir[1]], eps);
            worst = worst.max((a[0] - b[0]).hypot(a[1] - b[1]) / lg);
        }
    }
    SuiteOutcome { name: "seams", worst, tolerance: 1e-8, detail: "gradient jump across |p| = 1 ± ε/2, relative to L_g".into() }
}

fn toy_saddles(rng: &mut StdRng) -> SuiteOutcome {
    // Random positive diagonal A with f random: u* = f/(a²+1), p* = a·u*.
    let mut worst: f64 = 0.0;
    let opts = RunOptions::new(StopRule::new(1e-12, 200_000));
    for _ in 0..5 {
        let a: Vec<f64> = (0..3).map(|_| rng.gen_range(0.5..2.0)).collect();
        let f = random_vec(rng, 3, 1.0);
        let norm = a.iter().cloned().fold(0.0, f64::max);
        let problem = QuadraticProblem::diagonal(&a).with_f(1.0, f.clone()).with_g(1.0, vec![0.0; 3]).with_norm_a(norm);
        let u_star: Vec<f64> = a.iter().zip(&f).map(|(ai, fi)| fi / (ai * ai + 1.0)).collect();
        let p_star: Vec<f64> = a.iter().zip(&u_star).map(|(ai, ui)| ai * ui).collect();
        let alpha = 0.9 / (norm * norm + 1.0);
        let runs = [
            run_explicit(&problem, StepParams::new(alpha, alpha).unwrap(), SolverState::initial(&problem), &opts),
            run_semi_implicit(
                &problem,
                StepParams::new(0.5, 0.9).unwrap(),
                &CgInnerSolver::default(),
                SolverState::initial(&problem),
                &opts,
            ),
        ];
        for run in runs {
            match run {
                Ok(r) => {
                    let s = &r.final_state;
                    for (x, y) in s.u.iter().zip(&u_star).chain(s.p.iter().zip(&p_star)) {
                        worst = worst.max((x - y).abs());
                    }
                }
                Err(_) => worst = f64::INFINITY,
            }
        }
    }
    SuiteOutcome { name: "toy-saddles", worst, tolerance: 1e-6, detail: "random diagonal quadratics, both algorithms".into() }
}

fn disk() -> SuiteOutcome {
    let n = 201;
    let run = grid_for_resolution(n, DomainKind::Disk).and_then(|grid| {
        let mut c = TorsionConfig::new(grid, 5.0, Scheme::Implicit);
        c.inner.preconditioner = Preconditioner::Multigrid;
        let r = run_scheme(&c)?;
        Ok((grid.h(), extract_radii(&r.u)?))
    });
    match run {
        Ok((h, radii)) => {
            let r = radii.inner.unwrap_or(f64::NAN);
            let big = radii.outer.unwrap_or(f64::NAN);
            let worst = ((r - 0.4).abs() / h).max((big - 0.4).abs() / h);
            SuiteOutcome {
                name: "disk",
                worst: if worst.is_nan() { f64::INFINITY } else { worst },
                tolerance: 1.0,
                detail: format!("N={n}: r={r:.5}, R={big:.5}, exact 0.4, error in units of h"),
            }
        }
        Err(e) => SuiteOutcome { name: "disk", worst: f64::INFINITY, tolerance: 1.0, detail: e.to_string() },
    }
}

/// Runs the selected suites in a fixed order.
pub fn cmd_verify(opts: &VerifyOptions) -> Vec<SuiteOutcome> {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let closure = if opts.mutate_divergence { Closure::Mirrored } else { Closure::Mac };
    let mut out = Vec::new();
    for name in SUITES {
        if opts.skip.iter().any(|s| s == name) {
            continue;
        }
        out.push(match name {
            "projections" => projections(&mut rng),
            "adjointness" => adjointness(&mut rng, closure),
            "helmholtz" => helmholtz(&mut rng),
            "seams" => seams(&mut rng),
            "toy-saddles" => toy_saddles(&mut rng),
            _ => disk(),
        });
    }
    out
}
