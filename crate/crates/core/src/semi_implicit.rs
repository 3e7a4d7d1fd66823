//! Semi-implicit primal-dual scheme: the dual step matches the explicit
//! scheme, while the primal direction is preconditioned by `(A*A + I)⁻¹`.
//! Its step conditions do not involve `‖A‖`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::krylov::conjugate_gradient;
use crate::projections::Projector;
use crate::saddle::{
    drive, ConvergenceReport, Observation, RunOptions, SaddleProblem, SolverState, StepParams,
};
use crate::saddle::internal::{check_positive, dual_step, finish_primal, individual_bounds, problem_residual};

/// Default relative residual for the inner `(A*A + I)` solves.
pub const DEFAULT_INNER_TOLERANCE: f64 = 1e-10;

/// Solver for `(A*A + I) x = rhs`.
pub trait InnerSolver<P: SaddleProblem + ?Sized> {
    /// `guess` is a warm start and may be ignored.
    fn solve(&self, problem: &P, rhs: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>>;

    /// Relative residual bound guaranteed by a successful solve.
    fn tolerance(&self) -> f64;
}

/// Unpreconditioned matrix-free CG on `A*A + I`, using only `apply_a` and
/// `apply_a_adjoint`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgInnerSolver {
    pub tolerance: f64,
    pub max_inner_iters: usize,
}

impl Default for CgInnerSolver {
    fn default() -> Self {
        Self { tolerance: DEFAULT_INNER_TOLERANCE, max_inner_iters: 10_000 }
    }
}

impl<P: SaddleProblem + ?Sized> InnerSolver<P> for CgInnerSolver {
    fn solve(&self, problem: &P, rhs: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>> {
        let mut tmp = vec![0.0; problem.dual_dim()];
        let apply = |x: &[f64], y: &mut [f64]| {
            problem.apply_a(x, &mut tmp);
            problem.apply_a_adjoint(&tmp, y);
            for (yi, xi) in y.iter_mut().zip(x) {
                *yi += xi;
            }
        };
        let out = conjugate_gradient(
            apply,
            None,
            |a, b| problem.primal_dot(a, b),
            rhs,
            guess,
            self.tolerance,
            self.max_inner_iters,
        );
        if out.converged {
            Ok(out.x)
        } else {
            Err(Error::InnerSolve { iterations: out.iterations, residual: out.relative_residual() })
        }
    }

    fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// `α < 2/L_g`, `β < 2/L_f` (vacuous at zero) and `αβ + αL_g/2 < 1`.
pub fn semi_implicit_step_condition(
    alpha: f64,
    beta: f64,
    lipschitz_f: f64,
    lipschitz_g: f64,
) -> Result<bool> {
    check_positive(alpha, beta)?;
    Ok(individual_bounds(alpha, beta, lipschitz_f, lipschitz_g)
        && alpha * beta + alpha * lipschitz_g / 2.0 < 1.0)
}

pub fn validate_semi_implicit_steps<P: SaddleProblem + ?Sized>(
    alpha: f64,
    beta: f64,
    problem: &P,
) -> Result<bool> {
    semi_implicit_step_condition(alpha, beta, problem.lipschitz_f(), problem.lipschitz_g())
}

/// Minimizer of `½(‖Au − q0‖² + ‖u − u0‖²)`, i.e. `(A*A + I)⁻¹(A*q0 + u0)`.
pub fn prox_quadratic<P, S>(problem: &P, solver: &S, q0: &[f64], u0: &[f64]) -> Result<Vec<f64>>
where
    P: SaddleProblem + ?Sized,
    S: InnerSolver<P> + ?Sized,
{
    let rhs = prox_rhs(problem, q0, u0);
    solver.solve(problem, &rhs, None)
}

fn prox_rhs<P: SaddleProblem + ?Sized>(problem: &P, q0: &[f64], u0: &[f64]) -> Vec<f64> {
    let mut rhs = vec![0.0; problem.primal_dim()];
    problem.apply_a_adjoint(q0, &mut rhs);
    for (r, u) in rhs.iter_mut().zip(u0) {
        *r += u;
    }
    rhs
}

/// One semi-implicit step; returns the new state and the proximal
/// direction `ũ_n`, which callers may reuse as the next warm start.
pub fn semi_implicit_step<P, S>(
    state: &SolverState,
    problem: &P,
    steps: StepParams,
    solver: &S,
    guess: Option<&[f64]>,
) -> Result<(SolverState, Vec<f64>)>
where
    P: SaddleProblem + ?Sized,
    S: InnerSolver<P> + ?Sized,
{
    let p = dual_step(state, problem, steps.alpha);
    if !crate::vector::all_finite(&p) {
        return Err(Error::Diverged { iteration: state.iter + 1 });
    }
    let mut f = vec![0.0; problem.primal_dim()];
    problem.grad_f(&state.u, &mut f);
    let rhs = prox_rhs(problem, &p, &f);
    let direction = solver.solve(problem, &rhs, guess)?;
    let next = finish_primal(state, problem, steps.beta, &direction, p)?;
    Ok((next, direction))
}

/// ```text
/// p+ = Π_K(p + α(Aū − G'(p)))
/// ũ  = (A*A + I)⁻¹(A*p+ + F'(u))
/// u+ = Π_C(u − βũ)
/// ū+ = 2u+ − u
/// ```
pub fn semi_implicit_iterate<P, S>(
    state: &SolverState,
    problem: &P,
    steps: StepParams,
    solver: &S,
) -> Result<SolverState>
where
    P: SaddleProblem + ?Sized,
    S: InnerSolver<P> + ?Sized,
{
    state.check_dims(problem)?;
    semi_implicit_step(state, problem, steps, solver, None).map(|(s, _)| s)
}

pub fn run_semi_implicit<P, S>(
    problem: &P,
    steps: StepParams,
    solver: &S,
    init: SolverState,
    options: &RunOptions,
) -> Result<ConvergenceReport>
where
    P: SaddleProblem + ?Sized,
    S: InnerSolver<P> + ?Sized,
{
    let validated = validate_semi_implicit_steps(steps.alpha, steps.beta, problem)?;
    if !validated && !options.allow_unvalidated_steps {
        return Err(Error::InvalidSteps { alpha: steps.alpha, beta: steps.beta });
    }
    init.check_dims(problem)?;
    let mut warm: Option<Vec<f64>> = None;
    let mut report = drive(
        init,
        &options.stop,
        |s| {
            let (next, dir) = semi_implicit_step(s, problem, steps, solver, warm.as_deref())?;
            warm = Some(dir);
            Ok(next)
        },
        |prev, next| Observation {
            residual: problem_residual(problem, prev, next),
            energy: problem.lagrangian(&next.u, &next.p),
        },
    )?;
    report.steps_validated = validated;
    Ok(report)
}

/// Outcome of the sampled check of `<A(u − Πu), AΠu> ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisCheck {
    pub holds: bool,
    /// Smallest normalized value `<A(u−Πu), AΠu> / (‖A(u−Πu)‖‖AΠu‖)` seen.
    pub worst: f64,
    pub samples: usize,
}

/// Sampled diagnostic for the compatibility of `A` with a projector
/// containing the origin. Sampling cannot prove the property; a `false`
/// result comes with a concrete violating sample.
pub fn check_hypothesis_ha<P, R>(
    problem: &P,
    projector: &Projector,
    samples: usize,
    tol: f64,
    rng: &mut R,
) -> Result<HypothesisCheck>
where
    P: SaddleProblem + ?Sized,
    R: Rng + ?Sized,
{
    if !projector.contains_origin() {
        return Err(Error::OriginNotInSet);
    }
    let n = problem.primal_dim();
    let m = problem.dual_dim();
    let mut worst = f64::INFINITY;
    let mut a_rem = vec![0.0; m];
    let mut a_proj = vec![0.0; m];
    for _ in 0..samples {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let pu = projector.project(&u);
        let rem: Vec<f64> = u.iter().zip(&pu).map(|(a, b)| a - b).collect();
        problem.apply_a(&rem, &mut a_rem);
        problem.apply_a(&pu, &mut a_proj);
        let scale = (problem.dual_dot(&a_rem, &a_rem) * problem.dual_dot(&a_proj, &a_proj)).sqrt();
        let value = problem.dual_dot(&a_rem, &a_proj);
        let normalized = if scale > 0.0 { value / scale } else { 0.0 };
        worst = worst.min(normalized);
    }
    if samples == 0 {
        worst = 0.0;
    }
    Ok(HypothesisCheck { holds: worst >= -tol, worst, samples })
}
