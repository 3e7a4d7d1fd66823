use super::driver::{drive, ConvergenceReport, Observation, RunOptions};
use super::problem::{check_positive, SaddleProblem, SolverState, StepParams};
use crate::error::{Error, Result};

/// Sufficient step conditions for the explicit scheme in terms of the raw
/// constants. A zero Lipschitz constant makes the matching individual bound
/// vacuous; with `L_f = L_g = 0` this reduces to `αβ‖A‖² < 1`.
pub fn explicit_step_condition(
    alpha: f64,
    beta: f64,
    lipschitz_f: f64,
    lipschitz_g: f64,
    norm_a: f64,
) -> Result<bool> {
    check_positive(alpha, beta)?;
    let coupling = alpha * beta * (norm_a * norm_a - lipschitz_f * lipschitz_g / 4.0)
        + alpha * lipschitz_g / 2.0
        + beta * lipschitz_f / 2.0;
    Ok(individual_bounds(alpha, beta, lipschitz_f, lipschitz_g) && coupling < 1.0)
}

pub(crate) fn individual_bounds(alpha: f64, beta: f64, lipschitz_f: f64, lipschitz_g: f64) -> bool {
    (lipschitz_g == 0.0 || alpha * lipschitz_g < 2.0)
        && (lipschitz_f == 0.0 || beta * lipschitz_f < 2.0)
}

pub fn validate_explicit_steps<P: SaddleProblem + ?Sized>(
    alpha: f64,
    beta: f64,
    problem: &P,
) -> Result<bool> {
    explicit_step_condition(alpha, beta, problem.lipschitz_f(), problem.lipschitz_g(), problem.norm_a())
}

/// Dual ascent step shared by the explicit and semi-implicit schemes:
/// `Π_K(p + α(Aū − G'(p)))`.
pub(crate) fn dual_step<P: SaddleProblem + ?Sized>(
    state: &SolverState,
    problem: &P,
    alpha: f64,
) -> Vec<f64> {
    let mut a_ubar = vec![0.0; problem.dual_dim()];
    problem.apply_a(&state.u_bar, &mut a_ubar);
    let mut g = vec![0.0; problem.dual_dim()];
    problem.grad_g(&state.p, &mut g);
    let mut p: Vec<f64> = state
        .p
        .iter()
        .zip(a_ubar.iter().zip(&g))
        .map(|(pi, (ai, gi))| pi + alpha * (ai - gi))
        .collect();
    problem.project_k(&mut p);
    p
}

/// Projected primal step `Π_C(u − β d)` followed by the extrapolation
/// `ū = 2u_{n+1} − u_n`.
pub(crate) fn finish_primal<P: SaddleProblem + ?Sized>(
    state: &SolverState,
    problem: &P,
    beta: f64,
    direction: &[f64],
    p: Vec<f64>,
) -> Result<SolverState> {
    let mut u: Vec<f64> = state
        .u
        .iter()
        .zip(direction)
        .map(|(ui, di)| ui - beta * di)
        .collect();
    problem.project_c(&mut u);
    let u_bar = u.iter().zip(&state.u).map(|(new, old)| 2.0 * new - old).collect();
    let next = SolverState { u, p, u_bar, iter: state.iter + 1 };
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::Diverged { iteration: next.iter })
    }
}

/// One step of the explicit scheme:
///
/// ```text
/// p+ = Π_K(p + α(Aū − G'(p)))
/// u+ = Π_C(u − β(A*p+ + F'(u)))
/// ū+ = 2u+ − u
/// ```
pub fn explicit_iterate<P: SaddleProblem + ?Sized>(
    state: &SolverState,
    problem: &P,
    steps: StepParams,
) -> Result<SolverState> {
    state.check_dims(problem)?;
    let p = dual_step(state, problem, steps.alpha);
    let mut direction = vec![0.0; problem.primal_dim()];
    problem.apply_a_adjoint(&p, &mut direction);
    let mut f = vec![0.0; problem.primal_dim()];
    problem.grad_f(&state.u, &mut f);
    for (d, fi) in direction.iter_mut().zip(&f) {
        *d += fi;
    }
    finish_primal(state, problem, steps.beta, &direction, p)
}

pub(crate) fn problem_residual<P: SaddleProblem + ?Sized>(
    problem: &P,
    prev: &SolverState,
    next: &SolverState,
) -> f64 {
    let du: Vec<f64> = next.u.iter().zip(&prev.u).map(|(a, b)| a - b).collect();
    let dp: Vec<f64> = next.p.iter().zip(&prev.p).map(|(a, b)| a - b).collect();
    problem.primal_dot(&du, &du).sqrt() + problem.dual_dot(&dp, &dp).sqrt()
}

/// Runs the explicit scheme until the fixed-point residual (measured in the
/// problem's norms) drops below the tolerance.
pub fn run_explicit<P: SaddleProblem + ?Sized>(
    problem: &P,
    steps: StepParams,
    init: SolverState,
    options: &RunOptions,
) -> Result<ConvergenceReport> {
    let validated = validate_explicit_steps(steps.alpha, steps.beta, problem)?;
    if !validated && !options.allow_unvalidated_steps {
        return Err(Error::InvalidSteps { alpha: steps.alpha, beta: steps.beta });
    }
    init.check_dims(problem)?;
    let mut report = drive(
        init,
        &options.stop,
        |s| explicit_iterate(s, problem, steps),
        |prev, next| Observation {
            residual: problem_residual(problem, prev, next),
            energy: problem.lagrangian(&next.u, &next.p),
        },
    )?;
    report.steps_validated = validated;
    Ok(report)
}
