use super::integrand::{dphi_star_eps, phi, phi_star};
use super::problem::{faces_to_cells, TorsionProblem};
use super::schemes::residual;
use crate::error::{Error, Result};
use crate::grid::{gradient_into, FaceField, GridSpec, ScalarField};
use crate::saddle::SaddleProblem;

/// Cell-centered gradient of `u` (masked to the domain), each component
/// averaged from the two adjacent faces.
pub fn cell_gradient(u: &ScalarField) -> Vec<[f64; 2]> {
    let mut masked = u.values.clone();
    for (v, a) in masked.iter_mut().zip(u.grid.active_cells()) {
        if !a {
            *v = 0.0;
        }
    }
    cells_of_gradient(&u.grid, &masked)
}

fn cells_of_gradient(grid: &GridSpec, u: &[f64]) -> Vec<[f64; 2]> {
    let mut faces = vec![0.0; grid.face_len()];
    gradient_into(grid, u, &mut faces);
    cells_of_faces(grid, &faces)
}

fn cells_of_faces(grid: &GridSpec, p: &[f64]) -> Vec<[f64; 2]> {
    let mut cells = vec![[0.0; 2]; grid.scalar_len()];
    faces_to_cells(grid, p, &mut cells);
    cells
}

/// `|∇u|` at cell centers.
pub fn gradient_magnitude(u: &ScalarField) -> ScalarField {
    let values = cell_gradient(u).iter().map(|g| g[0].hypot(g[1])).collect();
    ScalarField { grid: u.grid, values }
}

/// `h² Σ φ(∇u)` with the gradient evaluated at cell centers.
pub fn primal_energy(u: &ScalarField) -> f64 {
    let h = u.grid.h();
    h * h * cell_gradient(u).into_iter().map(phi).sum::<f64>()
}

/// `h² Σ φ*(p)` with `p` averaged to cell centers.
pub fn dual_energy(p: &FaceField) -> f64 {
    let h = p.grid.h();
    h * h * cells_of_faces(&p.grid, &p.to_flat()).into_iter().map(phi_star).sum::<f64>()
}

pub(crate) fn primal_energy_flat(problem: &TorsionProblem, u: &[f64]) -> f64 {
    let grid = problem.grid();
    let mut faces = vec![0.0; problem.dual_dim()];
    problem.apply_a(u, &mut faces);
    let h = grid.h();
    h * h * cells_of_faces(grid, &faces).into_iter().map(phi).sum::<f64>()
}

pub(crate) fn dual_energy_flat(problem: &TorsionProblem, p: &[f64]) -> f64 {
    let grid = problem.grid();
    let h = grid.h();
    h * h * cells_of_faces(grid, p).into_iter().map(phi_star).sum::<f64>()
}

/// Radii read off a disk solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radii {
    /// Largest radius of a cell with `|∇u| < 0.5` inside the material ring.
    pub inner: Option<f64>,
    /// Smallest radius of a cell with `|∇u| > 1`.
    pub outer: Option<f64>,
}

/// Inner and outer radius of the transition ring of a disk solution. Only
/// cells inside the disk are considered, and the inner radius is searched
/// below the outer one (below the disk radius when there is none).
pub fn extract_radii(u: &ScalarField) -> Result<Radii> {
    let (radius, center) = super::disk_geometry(&u.grid)
        .ok_or_else(|| Error::InvalidGrid("radius extraction needs a disk domain".into()))?;
    let n = u.grid.n_cells();
    let active = u.grid.active_cells();
    let mag = gradient_magnitude(u);
    let radius_of = |k: usize| {
        let (x, y) = u.grid.cell_center(k % n, k / n);
        (x - center.0).hypot(y - center.1)
    };
    let cells = || (0..n * n).filter(|&k| active[k]);

    let outer = cells()
        .filter(|&k| mag.values[k] > 1.0)
        .map(radius_of)
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r))));
    let bound = outer.unwrap_or(radius);
    let inner = cells()
        .filter(|&k| mag.values[k] < 0.5)
        .map(radius_of)
        .filter(|&r| r < bound)
        .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
    Ok(Radii { inner, outer })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityReport {
    /// `‖Div^h p + λ‖`.
    pub feasibility: f64,
    /// Share of active cells where `|∇u − ∂φ*_ε(p)| > tol`.
    pub inclusion_violation: f64,
    /// `h² Σ [φ(∇u) + φ*(p) − ∇u·p]` over the active cells, nonnegative by
    /// Young's inequality.
    pub fenchel_gap: f64,
    /// Whether `feasibility ≤ tol`.
    pub feasible: bool,
}

/// Optimality diagnostics for a candidate pair, all evaluated at cell
/// centers.
pub fn check_optimality(
    u: &ScalarField,
    p: &FaceField,
    lambda: f64,
    epsilon: f64,
    tol: f64,
) -> OptimalityReport {
    let grid = u.grid;
    let h2 = grid.h() * grid.h();
    let grads = cell_gradient(u);
    let duals = cells_of_faces(&grid, &p.to_flat());
    let active = grid.active_cells();

    let mut gap = 0.0;
    let mut violations = 0usize;
    for ((z, q), a) in grads.iter().zip(&duals).zip(&active) {
        if *a {
            gap += phi(*z) + phi_star(*q) - (z[0] * q[0] + z[1] * q[1]);
            let d = dphi_star_eps(*q, epsilon);
            if (z[0] - d[0]).hypot(z[1] - d[1]) > tol {
                violations += 1;
            }
        }
    }
    let n_active = active.iter().filter(|a| **a).count().max(1);
    let feasibility = residual(p, lambda);
    OptimalityReport {
        feasibility,
        inclusion_violation: violations as f64 / n_active as f64,
        fenchel_gap: h2 * gap,
        feasible: feasibility <= tol,
    }
}
