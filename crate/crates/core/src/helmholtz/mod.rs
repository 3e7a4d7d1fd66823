//! Solver for `(I − Δ^h) v = rhs` with `v = 0` on the Dirichlet boundary,
//! where `Δ^h = Div^h ∇^h`. On disk domains the unknowns outside the disk
//! are pinned to zero, so the operator acts as the identity there.

mod banded;
mod multigrid;

pub use multigrid::VCycle;

use crate::error::{Error, Result};
use crate::grid::{divergence_into, gradient_into, GridSpec, ScalarField};
use crate::krylov::conjugate_gradient;

pub const DEFAULT_REL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    /// One symmetric geometric-multigrid V-cycle per CG iteration.
    Multigrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzConfig {
    pub rel_tolerance: f64,
    pub max_iters: usize,
    pub grid: GridSpec,
    pub preconditioner: Preconditioner,
}

impl HelmholtzConfig {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            rel_tolerance: DEFAULT_REL_TOLERANCE,
            max_iters: 20_000,
            grid,
            preconditioner: Preconditioner::None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance < 1.0) {
            return Err(Error::InvalidConfig {
                field: "rel_tolerance",
                reason: format!("must lie in (0, 1), got {}", self.rel_tolerance),
            });
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig { field: "max_iters", reason: "must be at least 1".into() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HelmholtzSolution {
    pub field: ScalarField,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    /// CG quadratic functional per iteration; non-increasing.
    pub energy_history: Vec<f64>,
}

/// Matrix-free `(I − Δ^h)` with its scratch buffers and (optionally) a
/// prebuilt multigrid hierarchy. Reusable across many solves on one grid.
#[derive(Debug, Clone)]
pub struct HelmholtzOperator {
    config: HelmholtzConfig,
    active: Vec<bool>,
    all_active: bool,
    vcycle: Option<VCycle>,
}

impl HelmholtzOperator {
    pub fn new(config: HelmholtzConfig) -> Result<Self> {
        config.validate()?;
        let active = config.grid.active_cells();
        let all_active = active.iter().all(|a| *a);
        let vcycle = match config.preconditioner {
            Preconditioner::None => None,
            Preconditioner::Multigrid => Some(VCycle::new(&config.grid, &active)),
        };
        Ok(Self { config, active, all_active, vcycle })
    }

    pub fn config(&self) -> &HelmholtzConfig {
        &self.config
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    /// Zeroes the pinned cells.
    pub fn mask(&self, v: &mut [f64]) {
        if !self.all_active {
            for (x, a) in v.iter_mut().zip(&self.active) {
                if !a {
                    *x = 0.0;
                }
            }
        }
    }

    /// `y = v − P Div ∇ P v` on active cells, `y = v` on pinned cells.
    pub fn apply(&self, v: &[f64], y: &mut [f64], face_scratch: &mut [f64], cell_scratch: &mut [f64]) {
        let grid = &self.config.grid;
        cell_scratch.copy_from_slice(v);
        self.mask(cell_scratch);
        gradient_into(grid, cell_scratch, face_scratch);
        divergence_into(grid, face_scratch, y);
        for ((yi, vi), a) in y.iter_mut().zip(v).zip(&self.active) {
            *yi = if *a { vi - *yi } else { *vi };
        }
    }

    pub fn solve(&self, rhs: &[f64], guess: Option<&[f64]>) -> Result<HelmholtzSolution> {
        let grid = self.config.grid;
        if rhs.len() != grid.scalar_len() {
            return Err(Error::DimensionMismatch { expected: grid.scalar_len(), found: rhs.len() });
        }
        if !crate::vector::all_finite(rhs) {
            return Err(Error::NonFinite("helmholtz right-hand side"));
        }
        let mut face = vec![0.0; grid.face_len()];
        let mut cell = vec![0.0; grid.scalar_len()];
        let apply = |x: &[f64], y: &mut [f64]| self.apply(x, y, &mut face, &mut cell);
        let mut mg = self.vcycle.as_ref().map(|v| {
            let mut work = v.workspace();
            move |r: &[f64], z: &mut [f64]| v.apply(r, z, &mut work)
        });
        let precond = mg.as_mut().map(|f| f as &mut dyn FnMut(&[f64], &mut [f64]));
        let out = conjugate_gradient(
            apply,
            precond,
            crate::vector::dot,
            rhs,
            guess,
            self.config.rel_tolerance,
            self.config.max_iters,
        );
        if !out.converged {
            return Err(Error::InnerSolve { iterations: out.iterations, residual: out.relative_residual() });
        }
        Ok(HelmholtzSolution {
            field: ScalarField { grid, values: out.x },
            iterations: out.iterations,
            residual_history: out.residual_history,
            energy_history: out.energy_history,
        })
    }
}

/// `v − Div^h ∇^h v` with the Dirichlet closure (and the disk pinning).
pub fn apply_operator(grid: &GridSpec, v: &ScalarField) -> ScalarField {
    let op = HelmholtzOperator::new(HelmholtzConfig::new(*grid)).expect("default config is valid");
    let mut y = vec![0.0; grid.scalar_len()];
    let mut face = vec![0.0; grid.face_len()];
    let mut cell = vec![0.0; grid.scalar_len()];
    op.apply(&v.values, &mut y, &mut face, &mut cell);
    ScalarField { grid: *grid, values: y }
}

/// Solves `(I − Δ^h) v = rhs` to `‖(I − Δ^h)v − rhs‖ ≤ rel_tolerance·‖rhs‖`.
pub fn solve(config: &HelmholtzConfig, rhs: &ScalarField) -> Result<HelmholtzSolution> {
    HelmholtzOperator::new(*config)?.solve(&rhs.values, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs() {
        let g = GridSpec::unit_square(8).unwrap();
        let out = solve(&HelmholtzConfig::new(g), &ScalarField::zeros(g)).unwrap();
        assert!(out.field.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        let g = GridSpec::unit_square(8).unwrap();
        let mut rhs = ScalarField::zeros(g);
        rhs.values[3] = f64::NAN;
        assert!(matches!(solve(&HelmholtzConfig::new(g), &rhs), Err(Error::NonFinite(_))));
        let mut cfg = HelmholtzConfig::new(g);
        cfg.rel_tolerance = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn budget_exhaustion_reports_residual() {
        let g = GridSpec::unit_square(16).unwrap();
        let mut cfg = HelmholtzConfig::new(g);
        cfg.max_iters = 2;
        let rhs = ScalarField::from_fn(g, |x, y| x * (1.0 - y));
        match solve(&cfg, &rhs) {
            Err(Error::InnerSolve { iterations, residual }) => {
                assert_eq!(iterations, 2);
                assert!(residual > cfg.rel_tolerance);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pinned_cells_stay_zero() {
        let g = GridSpec::disk(20, 0.4, (0.5, 0.5)).unwrap();
        let op = HelmholtzOperator::new(HelmholtzConfig::new(g)).unwrap();
        let mut rhs = vec![1.0; g.scalar_len()];
        op.mask(&mut rhs);
        let v = op.solve(&rhs, None).unwrap().field.values;
        for (x, a) in v.iter().zip(op.active()) {
            if !a {
                assert_eq!(*x, 0.0);
            }
        }
    }
}
