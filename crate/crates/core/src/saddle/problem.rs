use crate::error::{Error, Result};
use crate::vector;

/// A convex-concave saddle problem described through its operators.
///
/// Vectors are flat slices; implementors choose the Hilbert structure via
/// [`SaddleProblem::primal_dot`] and [`SaddleProblem::dual_dot`], and
/// `apply_a_adjoint` must be the adjoint with respect to those products.
/// The derivatives `grad_f`/`grad_g` are gradients in the same geometry.
pub trait SaddleProblem {
    fn primal_dim(&self) -> usize;
    fn dual_dim(&self) -> usize;

    fn apply_a(&self, u: &[f64], out: &mut [f64]);
    fn apply_a_adjoint(&self, p: &[f64], out: &mut [f64]);

    fn grad_f(&self, u: &[f64], out: &mut [f64]);
    fn grad_g(&self, p: &[f64], out: &mut [f64]);

    fn lipschitz_f(&self) -> f64;
    fn lipschitz_g(&self) -> f64;
    /// Upper bound on the operator norm of `A`.
    fn norm_a(&self) -> f64;

    fn project_c(&self, u: &mut [f64]);
    fn project_k(&self, p: &mut [f64]);

    fn primal_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        vector::dot(a, b)
    }

    fn dual_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        vector::dot(a, b)
    }

    /// Lagrangian value, when the problem knows `F` and `G` themselves.
    fn lagrangian(&self, _u: &[f64], _p: &[f64]) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    /// Dual step.
    pub alpha: f64,
    /// Primal step.
    pub beta: f64,
}

impl StepParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_positive(alpha, beta)?;
        Ok(Self { alpha, beta })
    }
}

pub(crate) fn check_positive(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::NonPositiveStep { name: "alpha", value: alpha });
    }
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::NonPositiveStep { name: "beta", value: beta });
    }
    Ok(())
}

/// Iterate triple `(u_n, p_n, ū_n)` and the iteration counter.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub u_bar: Vec<f64>,
    pub iter: usize,
}

impl SolverState {
    /// Zero element projected onto `C` and `K`, with `ū_0 = u_0`.
    pub fn initial<P: SaddleProblem + ?Sized>(problem: &P) -> Self {
        let mut u = vec![0.0; problem.primal_dim()];
        let mut p = vec![0.0; problem.dual_dim()];
        problem.project_c(&mut u);
        problem.project_k(&mut p);
        Self::from_pair(u, p)
    }

    pub fn from_pair(u: Vec<f64>, p: Vec<f64>) -> Self {
        let u_bar = u.clone();
        Self { u, p, u_bar, iter: 0 }
    }

    pub fn is_finite(&self) -> bool {
        vector::all_finite(&self.u) && vector::all_finite(&self.p) && vector::all_finite(&self.u_bar)
    }

    pub(crate) fn check_dims<P: SaddleProblem + ?Sized>(&self, problem: &P) -> Result<()> {
        for (expected, found) in [
            (problem.primal_dim(), self.u.len()),
            (problem.primal_dim(), self.u_bar.len()),
            (problem.dual_dim(), self.p.len()),
        ] {
            if expected != found {
                return Err(Error::DimensionMismatch { expected, found });
            }
        }
        Ok(())
    }
}
