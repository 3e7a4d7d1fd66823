//! Matrix-free conjugate gradients for symmetric positive definite systems.

use crate::vector::axpy;

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `‖b − Ax_k‖ / ‖b‖` for k = 0..=iterations.
    pub residual_history: Vec<f64>,
    /// Quadratic functional `½<x_k, Ax_k> − <b, x_k>`, which CG decreases
    /// monotonically (it is the squared energy-norm error up to a constant).
    pub energy_history: Vec<f64>,
}

impl CgOutcome {
    pub fn relative_residual(&self) -> f64 {
        *self.residual_history.last().unwrap_or(&0.0)
    }
}

/// Preconditioned CG. `dot` defines the inner product in which both the
/// operator and the preconditioner are self-adjoint.
pub fn conjugate_gradient(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    mut precondition: Option<&mut dyn FnMut(&[f64], &mut [f64])>,
    dot: impl Fn(&[f64], &[f64]) -> f64,
    rhs: &[f64],
    guess: Option<&[f64]>,
    rel_tol: f64,
    max_iters: usize,
) -> CgOutcome {
    let n = rhs.len();
    let b_norm = dot(rhs, rhs).sqrt();
    let mut x = guess.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    if b_norm == 0.0 {
        x.fill(0.0);
        return CgOutcome {
            x,
            iterations: 0,
            converged: true,
            residual_history: vec![0.0],
            energy_history: vec![0.0],
        };
    }

    let mut ax = vec![0.0; n];
    apply(&x, &mut ax);
    let mut r: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let energy = |x: &[f64], r: &[f64]| -0.5 * dot(x, rhs) - 0.5 * dot(x, r);

    let mut z = vec![0.0; n];
    let mut precond = |r: &[f64], z: &mut [f64]| match precondition.as_mut() {
        Some(m) => m(r, z),
        None => z.copy_from_slice(r),
    };
    precond(&r, &mut z);
    let mut d = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];

    let mut residual_history = vec![dot(&r, &r).sqrt() / b_norm];
    let mut energy_history = vec![energy(&x, &r)];
    let mut iterations = 0;
    let mut converged = residual_history[0] <= rel_tol;

    while !converged && iterations < max_iters {
        apply(&d, &mut q);
        let dq = dot(&d, &q);
        if !(dq > 0.0) {
            break;
        }
        let step = rz / dq;
        axpy(step, &d, &mut x);
        axpy(-step, &q, &mut r);
        iterations += 1;

        let rel = dot(&r, &r).sqrt() / b_norm;
        residual_history.push(rel);
        energy_history.push(energy(&x, &r));
        if rel <= rel_tol {
            converged = true;
            break;
        }

        precond(&r, &mut z);
        let rz_next = dot(&r, &z);
        let ratio = rz_next / rz;
        rz = rz_next;
        for (di, zi) in d.iter_mut().zip(&z) {
            *di = zi + ratio * *di;
        }
    }

    CgOutcome { x, iterations, converged, residual_history, energy_history }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::dot;

    fn spd_apply(x: &[f64], y: &mut [f64]) {
        // tridiag(-1, 3, -1)
        let n = x.len();
        for i in 0..n {
            let mut v = 3.0 * x[i];
            if i > 0 {
                v -= x[i - 1];
            }
            if i + 1 < n {
                v -= x[i + 1];
            }
            y[i] = v;
        }
    }

    #[test]
    fn solves_tridiagonal_system() {
        let b: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        let out = conjugate_gradient(spd_apply, None, dot, &b, None, 1e-12, 100);
        assert!(out.converged);
        let mut ax = vec![0.0; 20];
        spd_apply(&out.x, &mut ax);
        let err: f64 = ax.iter().zip(&b).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10);
        for w in out.energy_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-14);
        }
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let out = conjugate_gradient(spd_apply, None, dot, &[0.0; 5], Some(&[1.0; 5]), 1e-10, 10);
        assert_eq!(out.x, vec![0.0; 5]);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn jacobi_preconditioner_is_accepted() {
        let b = vec![1.0; 10];
        let mut jacobi = |r: &[f64], z: &mut [f64]| {
            for (zi, ri) in z.iter_mut().zip(r) {
                *zi = ri / 3.0;
            }
        };
        let out = conjugate_gradient(spd_apply, Some(&mut jacobi), dot, &b, None, 1e-12, 50);
        assert!(out.converged);
    }
}
