use rand::{Rng, SeedableRng};

use super::field::{face_dot, scalar_dot};
use super::{Domain, FaceField, GridSpec, ScalarField};
use crate::error::{Error, Result};

/// Boundary treatment of the divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// Exact negative adjoint of [`gradient`].
    Mac,
    /// Mirrors the first interior flux onto boundary faces. Not adjoint to
    /// the gradient; kept as a negative control for the adjointness checks.
    Mirrored,
}

/// Two-point face differences with `u = 0` on the Dirichlet boundary, which
/// sits half a cell from the boundary cell centers. Mirror faces get zero.
/// `out` is `comp1 ++ comp2`.
pub fn gradient_into(grid: &GridSpec, u: &[f64], out: &mut [f64]) {
    let n = grid.n_cells();
    let inv_h = 1.0 / grid.h();
    let sym = grid.symmetry();
    let (g1, g2) = out.split_at_mut(grid.comp1_len());

    for j in 0..n {
        let row = &u[j * n..(j + 1) * n];
        let out_row = &mut g1[j * (n + 1)..(j + 1) * (n + 1)];
        out_row[0] = if sym { 0.0 } else { 2.0 * row[0] * inv_h };
        for i in 1..n {
            out_row[i] = (row[i] - row[i - 1]) * inv_h;
        }
        out_row[n] = -2.0 * row[n - 1] * inv_h;
    }

    for i in 0..n {
        g2[i] = if sym { 0.0 } else { 2.0 * u[i] * inv_h };
    }
    for j in 1..n {
        for i in 0..n {
            g2[j * n + i] = (u[j * n + i] - u[(j - 1) * n + i]) * inv_h;
        }
    }
    for i in 0..n {
        g2[n * n + i] = -2.0 * u[(n - 1) * n + i] * inv_h;
    }
}

pub fn divergence_into(grid: &GridSpec, p: &[f64], out: &mut [f64]) {
    divergence_with(grid, p, out, Closure::Mac);
}

/// `(Div p)_{ij} = (p1_{i+½,j} − p1_{i−½,j})/h + (p2_{i,j+½} − p2_{i,j−½})/h`.
pub fn divergence_with(grid: &GridSpec, p: &[f64], out: &mut [f64], closure: Closure) {
    let n = grid.n_cells();
    let inv_h = 1.0 / grid.h();
    let sym = grid.symmetry();
    let (p1, p2) = p.split_at(grid.comp1_len());

    for j in 0..n {
        let row = &p1[j * (n + 1)..(j + 1) * (n + 1)];
        let out_row = &mut out[j * n..(j + 1) * n];
        for i in 0..n {
            let mut west = row[i];
            let mut east = row[i + 1];
            if i == 0 && sym {
                west = 0.0;
            }
            if closure == Closure::Mirrored {
                if i == 0 {
                    west = row[1];
                }
                if i == n - 1 {
                    east = row[n - 1];
                }
            }
            out_row[i] = (east - west) * inv_h;
        }
    }

    for j in 0..n {
        for i in 0..n {
            let mut south = p2[j * n + i];
            let mut north = p2[(j + 1) * n + i];
            if j == 0 && sym {
                south = 0.0;
            }
            if closure == Closure::Mirrored {
                if j == 0 {
                    south = p2[n + i];
                }
                if j == n - 1 {
                    north = p2[(n - 1) * n + i];
                }
            }
            out[j * n + i] += (north - south) * inv_h;
        }
    }
}

pub fn gradient(u: &ScalarField) -> FaceField {
    let mut flat = vec![0.0; u.grid.face_len()];
    gradient_into(&u.grid, &u.values, &mut flat);
    FaceField::from_flat(u.grid, &flat).expect("sized from grid")
}

pub fn divergence(p: &FaceField) -> ScalarField {
    let mut out = vec![0.0; p.grid.scalar_len()];
    divergence_into(&p.grid, &p.to_flat(), &mut out);
    ScalarField { grid: p.grid, values: out }
}

/// `|<∇u, p> + <u, Div p>| / (‖u‖‖p‖)` for the given divergence closure.
pub fn adjointness_gap(u: &ScalarField, p: &FaceField, closure: Closure) -> f64 {
    let grid = &u.grid;
    let flat_p = p.to_flat();
    let mut grad = vec![0.0; grid.face_len()];
    gradient_into(grid, &u.values, &mut grad);
    let mut div = vec![0.0; grid.scalar_len()];
    divergence_with(grid, &flat_p, &mut div, closure);
    let lhs = face_dot(grid, &grad, &flat_p);
    let rhs = scalar_dot(grid, &u.values, &div);
    let scale = u.norm() * p.norm();
    if scale == 0.0 {
        0.0
    } else {
        (lhs + rhs).abs() / scale
    }
}

pub fn check_adjointness(u: &ScalarField, p: &FaceField) -> f64 {
    adjointness_gap(u, p, Closure::Mac)
}

/// `c_h = 2√2 / h`, the bound on `‖∇‖` used for explicit step sizes.
pub fn operator_norm_bound(grid: &GridSpec) -> f64 {
    2.0 * std::f64::consts::SQRT_2 / grid.h()
}

const POWER_SEED: u64 = 0x5eed_0f_c0de;

/// Largest singular value of the gradient estimated by power iteration on
/// `∇*∇ = −Div ∇` from a fixed-seed random start.
pub fn power_iteration_norm(grid: &GridSpec, iters: usize) -> Result<f64> {
    if iters < 50 {
        return Err(Error::InvalidConfig {
            field: "iters",
            reason: format!("power iteration needs at least 50 steps, got {iters}"),
        });
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(POWER_SEED);
    let mut x: Vec<f64> = (0..grid.scalar_len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut g = vec![0.0; grid.face_len()];
    let mut y = vec![0.0; grid.scalar_len()];
    let mut estimate = 0.0;
    for _ in 0..iters {
        let nx = scalar_dot(grid, &x, &x).sqrt();
        x.iter_mut().for_each(|v| *v /= nx);
        gradient_into(grid, &x, &mut g);
        estimate = face_dot(grid, &g, &g).sqrt();
        divergence_into(grid, &g, &mut y);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = -yi;
        }
    }
    Ok(estimate)
}

/// Indices of cells whose centers lie strictly inside the disk.
pub fn mask_disk(grid: &GridSpec) -> Result<Vec<usize>> {
    match grid.domain() {
        Domain::DiskInSquare { .. } => Ok(grid
            .active_cells()
            .iter()
            .enumerate()
            .filter_map(|(k, &a)| a.then_some(k))
            .collect()),
        other => Err(Error::InvalidGrid(format!("mask_disk needs a disk domain, got {other:?}"))),
    }
}
