//! Symmetric geometric V-cycle for `I − Δ` on cell-centered grids, with
//! the coarse operators rediscretized on each level.
//!
//! Restriction averages the four children, prolongation injects the coarse
//! value; with the `h²`-weighted products the two are adjoint, and damped
//! Jacobi is applied the same number of times before and after the coarse
//! correction, so one cycle is a symmetric positive preconditioner.

use super::banded::BandedCholesky;
use crate::grid::GridSpec;

const SMOOTHING_STEPS: usize = 2;
const JACOBI_WEIGHT: f64 = 0.8;
const MIN_COARSE_CELLS: usize = 4;

#[derive(Debug, Clone)]
struct Level {
    n: usize,
    /// `1 / h²`
    coupling: f64,
    symmetry: bool,
    active: Vec<bool>,
    diag: Vec<f64>,
}

impl Level {
    fn new(n: usize, h: f64, symmetry: bool, active: Vec<bool>) -> Self {
        let coupling = 1.0 / (h * h);
        let mut level = Self { n, coupling, symmetry, active, diag: Vec::new() };
        level.diag = (0..n * n).map(|k| level.diagonal(k)).collect();
        level
    }

    /// Face coefficients west, east, south, north: 1 towards a neighbor
    /// cell, 2 towards a Dirichlet boundary, 0 across a mirror line.
    fn side_weights(&self, i: usize, j: usize) -> [f64; 4] {
        let n = self.n;
        let low = |k: usize| {
            if k > 0 {
                1.0
            } else if self.symmetry {
                0.0
            } else {
                2.0
            }
        };
        let high = |k: usize| if k + 1 < n { 1.0 } else { 2.0 };
        [low(i), high(i), low(j), high(j)]
    }

    fn diagonal(&self, k: usize) -> f64 {
        if !self.active[k] {
            return 1.0;
        }
        let (i, j) = (k % self.n, k / self.n);
        1.0 + self.coupling * self.side_weights(i, j).iter().sum::<f64>()
    }

    fn neighbor_coupling(&self, a: usize, b: usize) -> f64 {
        if self.active[a] && self.active[b] {
            -self.coupling
        } else {
            0.0
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        for j in 0..n {
            for i in 0..n {
                let k = j * n + i;
                let mut v = self.diag[k] * x[k];
                if self.active[k] {
                    let mut off = 0.0;
                    if i > 0 && self.active[k - 1] {
                        off += x[k - 1];
                    }
                    if i + 1 < n && self.active[k + 1] {
                        off += x[k + 1];
                    }
                    if j > 0 && self.active[k - n] {
                        off += x[k - n];
                    }
                    if j + 1 < n && self.active[k + n] {
                        off += x[k + n];
                    }
                    v -= self.coupling * off;
                }
                y[k] = v;
            }
        }
    }

    fn smooth(&self, b: &[f64], x: &mut [f64], scratch: &mut [f64]) {
        for _ in 0..SMOOTHING_STEPS {
            self.apply(x, scratch);
            for k in 0..x.len() {
                x[k] += JACOBI_WEIGHT * (b[k] - scratch[k]) / self.diag[k];
            }
        }
    }

    fn factor(&self) -> BandedCholesky {
        let n = self.n;
        BandedCholesky::factor(n * n, n, |a, b| {
            if a == b {
                self.diag[a]
            } else if (a - b == 1 && a % n != 0) || a - b == n {
                self.neighbor_coupling(a, b)
            } else {
                0.0
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct VCycle {
    levels: Vec<Level>,
    coarse: BandedCholesky,
}

#[derive(Debug, Clone)]
pub struct VCycleWork {
    x: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
}

impl VCycle {
    pub fn new(grid: &GridSpec, active: &[bool]) -> Self {
        let mut levels = vec![Level::new(grid.n_cells(), grid.h(), grid.symmetry(), active.to_vec())];
        let mut h = grid.h();
        loop {
            let fine = levels.last().expect("nonempty");
            if fine.n % 2 != 0 || fine.n / 2 < MIN_COARSE_CELLS {
                break;
            }
            let nc = fine.n / 2;
            let mut coarse_active = vec![false; nc * nc];
            for (k, a) in fine.active.iter().enumerate() {
                if *a {
                    let (i, j) = (k % fine.n, k / fine.n);
                    coarse_active[(j / 2) * nc + i / 2] = true;
                }
            }
            h *= 2.0;
            let symmetry = fine.symmetry;
            levels.push(Level::new(nc, h, symmetry, coarse_active));
        }
        let coarse = levels.last().expect("nonempty").factor();
        Self { levels, coarse }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn workspace(&self) -> VCycleWork {
        let sizes: Vec<usize> = self.levels.iter().map(|l| l.n * l.n).collect();
        VCycleWork {
            x: sizes.iter().map(|&s| vec![0.0; s]).collect(),
            b: sizes.iter().map(|&s| vec![0.0; s]).collect(),
            r: sizes.iter().map(|&s| vec![0.0; s]).collect(),
        }
    }

    /// `z ≈ (I − Δ)⁻¹ r` with one V-cycle from a zero guess.
    pub fn apply(&self, r: &[f64], z: &mut [f64], work: &mut VCycleWork) {
        work.b[0].copy_from_slice(r);
        self.cycle(0, work);
        z.copy_from_slice(&work.x[0]);
    }

    fn cycle(&self, l: usize, work: &mut VCycleWork) {
        let level = &self.levels[l];
        if l + 1 == self.levels.len() {
            self.coarse.solve(&work.b[l], &mut work.x[l]);
            return;
        }
        work.x[l].fill(0.0);
        level.smooth(&work.b[l], &mut work.x[l], &mut work.r[l]);

        level.apply(&work.x[l], &mut work.r[l]);
        let coarse = &self.levels[l + 1];
        let (n, nc) = (level.n, coarse.n);
        {
            let (fine_b, coarse_b) = work.b.split_at_mut(l + 1);
            let (fine_b, coarse_b) = (&fine_b[l], &mut coarse_b[0]);
            let fine_r = &work.r[l];
            coarse_b.fill(0.0);
            for k in 0..n * n {
                if level.active[k] {
                    let (i, j) = (k % n, k / n);
                    coarse_b[(j / 2) * nc + i / 2] += 0.25 * (fine_b[k] - fine_r[k]);
                }
            }
        }
        self.cycle(l + 1, work);
        for k in 0..n * n {
            if level.active[k] {
                let (i, j) = (k % n, k / n);
                work.x[l][k] += work.x[l + 1][(j / 2) * nc + i / 2];
            }
        }
        let (x, b, r) = (&mut work.x[l], &work.b[l], &mut work.r[l]);
        level.smooth(b, x, r);
    }
}
