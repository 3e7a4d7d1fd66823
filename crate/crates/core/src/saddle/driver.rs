use std::time::Instant;

use super::problem::SolverState;
use crate::error::{Error, Result};
use crate::vector::distance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub tolerance: f64,
    pub max_iters: usize,
}

impl StopRule {
    pub fn new(tolerance: f64, max_iters: usize) -> Self {
        Self { tolerance, max_iters }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub stop: StopRule,
    /// Run even when the step sizes fall outside the proven region.
    pub allow_unvalidated_steps: bool,
}

impl RunOptions {
    pub fn new(stop: StopRule) -> Self {
        Self { stop, allow_unvalidated_steps: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIters,
    Diverged,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::MaxIters => "max_iters",
            Termination::Diverged => "diverged",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub iterations: usize,
    /// One entry per completed iteration.
    pub residual_history: Vec<f64>,
    pub energy_history: Vec<f64>,
    pub termination: Termination,
    /// Seconds.
    pub wall_time: f64,
    pub final_state: SolverState,
    /// False when the caller overrode the step-size validation.
    pub steps_validated: bool,
}

impl ConvergenceReport {
    pub fn final_residual(&self) -> Option<f64> {
        self.residual_history.last().copied()
    }

    /// Report for a run that stops before its first iteration.
    pub fn immediate(state: SolverState, termination: Termination) -> Self {
        Self {
            iterations: 0,
            residual_history: Vec::new(),
            energy_history: Vec::new(),
            termination,
            wall_time: 0.0,
            final_state: state,
            steps_validated: true,
        }
    }
}

/// What the driver records after each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub residual: f64,
    pub energy: Option<f64>,
}

/// `||u_{n+1} - u_n|| + ||p_{n+1} - p_n||` in Euclidean norms.
pub fn fixed_point_residual(prev: &SolverState, next: &SolverState) -> f64 {
    distance(&prev.u, &next.u) + distance(&prev.p, &next.p)
}

/// Repeats `step` until the observed residual drops below the tolerance or
/// the iteration budget runs out. A non-finite iterate ends the run with
/// [`Termination::Diverged`] and keeps the last finite state; every other
/// step error is propagated.
pub fn drive(
    init: SolverState,
    stop: &StopRule,
    mut step: impl FnMut(&SolverState) -> Result<SolverState>,
    mut observe: impl FnMut(&SolverState, &SolverState) -> Observation,
) -> Result<ConvergenceReport> {
    let start = Instant::now();
    let mut state = init;
    let mut residual_history = Vec::new();
    let mut energy_history = Vec::new();
    let mut termination = Termination::MaxIters;

    while residual_history.len() < stop.max_iters {
        let next = match step(&state) {
            Ok(next) => next,
            Err(Error::Diverged { .. }) => {
                termination = Termination::Diverged;
                break;
            }
            Err(e) => return Err(e),
        };
        let obs = observe(&state, &next);
        state = next;
        residual_history.push(obs.residual);
        if let Some(e) = obs.energy {
            energy_history.push(e);
        }
        if !obs.residual.is_finite() {
            termination = Termination::Diverged;
            break;
        }
        if obs.residual < stop.tolerance {
            termination = Termination::Converged;
            break;
        }
    }

    Ok(ConvergenceReport {
        iterations: residual_history.len(),
        residual_history,
        energy_history,
        termination,
        wall_time: start.elapsed().as_secs_f64(),
        final_state: state,
        steps_validated: true,
    })
}
