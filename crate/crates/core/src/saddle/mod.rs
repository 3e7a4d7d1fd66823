//! Generic saddle-point problems `inf_{u∈C} sup_{p∈K} <Au, p> + F(u) - G(p)`
//! and the explicit primal-dual iteration with extrapolated primal point.

mod driver;
mod explicit;
mod problem;
mod quadratic;

pub use driver::{
    drive, fixed_point_residual, ConvergenceReport, Observation, RunOptions, StopRule, Termination,
};
pub use explicit::{
    explicit_iterate, explicit_step_condition, run_explicit, validate_explicit_steps,
};
pub use problem::{SaddleProblem, SolverState, StepParams};
pub use quadratic::QuadraticProblem;

pub(crate) mod internal {
    pub(crate) use super::explicit::{dual_step, finish_primal, individual_bounds, problem_residual};
    pub(crate) use super::problem::check_positive;
}
