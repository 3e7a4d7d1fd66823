use super::diagnostics::{dual_energy_flat, primal_energy_flat};
use super::problem::{HelmholtzInner, TorsionProblem};
use super::{Scheme, StepChoice, TorsionConfig};
use crate::error::{Error, Result};
use crate::grid::{FaceField, ScalarField};
use crate::saddle::internal::finish_primal;
use crate::saddle::{
    drive, explicit_iterate, explicit_step_condition, ConvergenceReport, Observation, SaddleProblem,
    SolverState, StepParams, StopRule, Termination,
};
use crate::semi_implicit::{semi_implicit_step, semi_implicit_step_condition, InnerSolver};
use crate::vector::all_finite;

/// Fraction of the `α` bound `2/L_g` used by the automatic choice.
const ALPHA_FRACTION: f64 = 0.45;
/// Fraction of the largest admissible `β`.
const BETA_MARGIN: f64 = 0.95;

#[derive(Debug, Clone)]
pub struct TorsionResult {
    pub u: ScalarField,
    pub p: FaceField,
    pub report: ConvergenceReport,
    pub primal_energy_history: Vec<f64>,
    pub dual_energy_history: Vec<f64>,
    /// Steps actually used. For ISS `alpha` is the full step; each dual
    /// sub-step uses `alpha / kappa`.
    pub steps: StepParams,
}

/// Automatic step sizes: `α = 0.45·4ε/(2+ε)` and the largest `β` allowed
/// by the scheme's condition, times 0.95. ISS scales `α` by `κ` so that
/// every sub-step still uses `0.45·4ε/(2+ε)`.
pub fn derive_steps(config: &TorsionConfig) -> Result<StepParams> {
    let lg = super::regularized_lipschitz(config.epsilon);
    let base = ALPHA_FRACTION * 2.0 / lg;
    let slack = 1.0 - base * lg / 2.0;
    let (alpha, beta) = match config.scheme {
        Scheme::Explicit => {
            let c = crate::grid::operator_norm_bound(&config.grid);
            (base, BETA_MARGIN * slack / (base * c * c))
        }
        Scheme::Implicit => (base, BETA_MARGIN * slack / base),
        Scheme::ImplicitSubiterated => {
            let alpha = base * config.kappa as f64;
            (alpha, BETA_MARGIN * slack / alpha)
        }
    };
    StepParams::new(alpha, beta)
}

/// Whether `steps` lie in the convergence region of the configured scheme.
pub fn validate_scheme_steps(config: &TorsionConfig, steps: StepParams) -> Result<bool> {
    let lg = super::regularized_lipschitz(config.epsilon);
    match config.scheme {
        Scheme::Explicit => {
            let c = crate::grid::operator_norm_bound(&config.grid);
            explicit_step_condition(steps.alpha, steps.beta, 0.0, lg, c)
        }
        Scheme::Implicit => semi_implicit_step_condition(steps.alpha, steps.beta, 0.0, lg),
        Scheme::ImplicitSubiterated => {
            StepParams::new(steps.alpha, steps.beta)?;
            let sub = steps.alpha / config.kappa as f64;
            Ok(sub * lg < 2.0 && steps.alpha * steps.beta + sub * lg / 2.0 < 1.0)
        }
    }
}

/// `‖Div^h p + λ‖` in the discrete L² norm over the active cells.
pub fn residual(p: &FaceField, lambda: f64) -> f64 {
    let grid = p.grid;
    let problem = TorsionProblem::new(grid, lambda, 1.0);
    residual_flat(&problem, &p.to_flat(), &mut vec![0.0; grid.scalar_len()])
}

fn residual_flat(problem: &TorsionProblem, p: &[f64], scratch: &mut [f64]) -> f64 {
    problem.feasibility_defect(p, scratch);
    problem.grid().h() * crate::vector::norm(scratch)
}

/// Runs the configured scheme from zero fields until the residual drops
/// below the tolerance or the outer budget runs out. Divergence and budget
/// exhaustion are reported through the termination reason.
pub fn run_scheme(config: &TorsionConfig) -> Result<TorsionResult> {
    config.validate()?;
    let steps = match config.steps {
        StepChoice::Auto => derive_steps(config)?,
        StepChoice::Manual(s) => {
            if !validate_scheme_steps(config, s)? {
                return Err(Error::InvalidSteps { alpha: s.alpha, beta: s.beta });
            }
            s
        }
    };
    let grid = config.grid;
    let problem = TorsionProblem::new(grid, config.lambda, config.epsilon);
    let init = SolverState::initial(&problem);
    let mut scratch = vec![0.0; grid.scalar_len()];

    let r0 = residual_flat(&problem, &init.p, &mut scratch);
    let mut primal_hist = Vec::new();
    let mut dual_hist = Vec::new();
    let report = if r0 < config.stop_tolerance {
        ConvergenceReport::immediate(init, Termination::Converged)
    } else {
        let stop = StopRule::new(config.stop_tolerance, config.max_outer_iters);
        let observe = |_: &SolverState, next: &SolverState| {
            let pe = primal_energy_flat(&problem, &next.u);
            let de = dual_energy_flat(&problem, &next.p);
            primal_hist.push(pe);
            dual_hist.push(de);
            Observation { residual: residual_flat(&problem, &next.p, &mut scratch), energy: Some(de) }
        };
        match config.scheme {
            Scheme::Explicit => drive(init, &stop, |s| explicit_iterate(s, &problem, steps), observe)?,
            Scheme::Implicit | Scheme::ImplicitSubiterated => {
                let inner = HelmholtzInner::new(config.helmholtz())?;
                let kappa = match config.scheme {
                    Scheme::Implicit => 1,
                    _ => config.kappa,
                };
                let mut warm: Option<Vec<f64>> = None;
                drive(
                    init,
                    &stop,
                    |s| {
                        let (next, dir) = if kappa == 1 {
                            semi_implicit_step(s, &problem, steps, &inner, warm.as_deref())?
                        } else {
                            subiterated_step(s, &problem, steps, kappa, &inner, warm.as_deref())?
                        };
                        warm = Some(dir);
                        Ok(next)
                    },
                    observe,
                )?
            }
        }
    };

    let state = &report.final_state;
    Ok(TorsionResult {
        u: ScalarField::from_values(grid, state.u.clone())?,
        p: FaceField::from_flat(grid, &state.p)?,
        primal_energy_history: primal_hist,
        dual_energy_history: dual_hist,
        steps,
        report,
    })
}

/// `κ` dual sub-steps of size `α/κ` with `ūₙ` held fixed, then the
/// semi-implicit primal update with the full `β`.
fn subiterated_step(
    state: &SolverState,
    problem: &TorsionProblem,
    steps: StepParams,
    kappa: usize,
    inner: &HelmholtzInner,
    guess: Option<&[f64]>,
) -> Result<(SolverState, Vec<f64>)> {
    let sub = steps.alpha / kappa as f64;
    let mut a_ubar = vec![0.0; problem.dual_dim()];
    problem.apply_a(&state.u_bar, &mut a_ubar);
    let mut p = state.p.clone();
    let mut g = vec![0.0; problem.dual_dim()];
    for _ in 0..kappa {
        problem.grad_g(&p, &mut g);
        for ((pi, ai), gi) in p.iter_mut().zip(&a_ubar).zip(&g) {
            *pi += sub * (ai - gi);
        }
        problem.project_k(&mut p);
    }
    if !all_finite(&p) {
        return Err(Error::Diverged { iteration: state.iter + 1 });
    }
    let mut rhs = vec![0.0; problem.primal_dim()];
    problem.apply_a_adjoint(&p, &mut rhs);
    let mut f = vec![0.0; problem.primal_dim()];
    problem.grad_f(&state.u, &mut f);
    for (r, fi) in rhs.iter_mut().zip(&f) {
        *r += fi;
    }
    let direction = inner.solve(problem, &rhs, guess)?;
    let next = finish_primal(state, problem, steps.beta, &direction, p)?;
    Ok((next, direction))
}
