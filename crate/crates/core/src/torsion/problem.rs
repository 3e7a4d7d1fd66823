use super::integrand::{phi_star_eps, radial_scale, regularized_lipschitz};
use crate::error::Result;
use crate::grid::{divergence_into, gradient_into, operator_norm_bound, GridSpec};
use crate::helmholtz::{HelmholtzConfig, HelmholtzOperator};
use crate::saddle::SaddleProblem;
use crate::semi_implicit::InnerSolver;

/// Averages face values to cell centers: `out` holds `(x, y)` pairs per
/// cell. Mirror faces count as zero.
pub fn faces_to_cells(grid: &GridSpec, p: &[f64], out: &mut [[f64; 2]]) {
    let n = grid.n_cells();
    let (p1, p2) = p.split_at(grid.comp1_len());
    let sym = grid.symmetry();
    for j in 0..n {
        for i in 0..n {
            let west = if sym && i == 0 { 0.0 } else { p1[j * (n + 1) + i] };
            let south = if sym && j == 0 { 0.0 } else { p2[j * n + i] };
            out[j * n + i] = [
                0.5 * (west + p1[j * (n + 1) + i + 1]),
                0.5 * (south + p2[(j + 1) * n + i]),
            ];
        }
    }
}

/// Adjoint of [`faces_to_cells`] for the weighted face product: interior
/// faces average their two cells, boundary faces copy their single cell,
/// mirror faces get zero.
pub fn cells_to_faces(grid: &GridSpec, q: &[[f64; 2]], out: &mut [f64]) {
    let n = grid.n_cells();
    let sym = grid.symmetry();
    let (o1, o2) = out.split_at_mut(grid.comp1_len());
    for j in 0..n {
        let row = &q[j * n..(j + 1) * n];
        let o = &mut o1[j * (n + 1)..(j + 1) * (n + 1)];
        o[0] = if sym { 0.0 } else { row[0][0] };
        for i in 1..n {
            o[i] = 0.5 * (row[i - 1][0] + row[i][0]);
        }
        o[n] = row[n - 1][0];
    }
    for i in 0..n {
        o2[i] = if sym { 0.0 } else { q[i][1] };
        o2[n * n + i] = q[(n - 1) * n + i][1];
    }
    for j in 1..n {
        for i in 0..n {
            o2[j * n + i] = 0.5 * (q[(j - 1) * n + i][1] + q[j * n + i][1]);
        }
    }
}

/// The regularized dual torsion problem as a saddle problem:
/// `A = ∇^h` (acting on the active cells), `F(u) = −λ∫u`,
/// `G(p) = ∫φ*_ε(p)` with `p` averaged to cell centers, `C` pins the cells
/// outside the domain, `K` is the whole space.
#[derive(Debug, Clone)]
pub struct TorsionProblem {
    grid: GridSpec,
    lambda: f64,
    epsilon: f64,
    active: Vec<bool>,
    all_active: bool,
}

impl TorsionProblem {
    pub fn new(grid: GridSpec, lambda: f64, epsilon: f64) -> Self {
        let active = grid.active_cells();
        let all_active = active.iter().all(|a| *a);
        Self { grid, lambda, epsilon, active, all_active }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    fn mask(&self, v: &mut [f64]) {
        if !self.all_active {
            for (x, a) in v.iter_mut().zip(&self.active) {
                if !a {
                    *x = 0.0;
                }
            }
        }
    }

    /// `Div^h p + λ` on active cells, zero elsewhere.
    pub fn feasibility_defect(&self, p: &[f64], out: &mut [f64]) {
        divergence_into(&self.grid, p, out);
        for (o, a) in out.iter_mut().zip(&self.active) {
            *o = if *a { *o + self.lambda } else { 0.0 };
        }
    }
}

impl SaddleProblem for TorsionProblem {
    fn primal_dim(&self) -> usize {
        self.grid.scalar_len()
    }

    fn dual_dim(&self) -> usize {
        self.grid.face_len()
    }

    fn apply_a(&self, u: &[f64], out: &mut [f64]) {
        if self.all_active {
            gradient_into(&self.grid, u, out);
        } else {
            let mut masked = u.to_vec();
            self.mask(&mut masked);
            gradient_into(&self.grid, &masked, out);
        }
    }

    fn apply_a_adjoint(&self, p: &[f64], out: &mut [f64]) {
        divergence_into(&self.grid, p, out);
        for o in out.iter_mut() {
            *o = -*o;
        }
        self.mask(out);
    }

    fn grad_f(&self, _u: &[f64], out: &mut [f64]) {
        out.fill(-self.lambda);
        self.mask(out);
    }

    fn grad_g(&self, p: &[f64], out: &mut [f64]) {
        let mut cells = vec![[0.0; 2]; self.grid.scalar_len()];
        faces_to_cells(&self.grid, p, &mut cells);
        for c in cells.iter_mut() {
            let s = radial_scale(c[0].hypot(c[1]), self.epsilon);
            c[0] *= s;
            c[1] *= s;
        }
        cells_to_faces(&self.grid, &cells, out);
    }

    fn lipschitz_f(&self) -> f64 {
        0.0
    }

    fn lipschitz_g(&self) -> f64 {
        regularized_lipschitz(self.epsilon)
    }

    fn norm_a(&self) -> f64 {
        operator_norm_bound(&self.grid)
    }

    fn project_c(&self, u: &mut [f64]) {
        self.mask(u);
    }

    fn project_k(&self, _p: &mut [f64]) {}

    fn primal_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        let h = self.grid.h();
        h * h * crate::vector::dot(a, b)
    }

    fn dual_dot(&self, a: &[f64], b: &[f64]) -> f64 {
        crate::grid::face_dot(&self.grid, a, b)
    }

    fn lagrangian(&self, u: &[f64], p: &[f64]) -> Option<f64> {
        let h2 = self.grid.h() * self.grid.h();
        let mut grad = vec![0.0; self.dual_dim()];
        self.apply_a(u, &mut grad);
        let coupling = self.dual_dot(&grad, p);
        let mut masked = u.to_vec();
        self.mask(&mut masked);
        let mass: f64 = h2 * masked.iter().sum::<f64>();
        let mut cells = vec![[0.0; 2]; self.grid.scalar_len()];
        faces_to_cells(&self.grid, p, &mut cells);
        let g: f64 = h2 * cells.iter().map(|c| phi_star_eps(*c, self.epsilon)).sum::<f64>();
        Some(coupling - self.lambda * mass - g)
    }
}

/// Inner solver for `(A*A + I) = (I − Δ^h)` backed by the Helmholtz module.
#[derive(Debug, Clone)]
pub struct HelmholtzInner {
    operator: HelmholtzOperator,
}

impl HelmholtzInner {
    pub fn new(config: HelmholtzConfig) -> Result<Self> {
        Ok(Self { operator: HelmholtzOperator::new(config)? })
    }
}

impl InnerSolver<TorsionProblem> for HelmholtzInner {
    fn solve(&self, _problem: &TorsionProblem, rhs: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>> {
        // The torsion primal product is h²-scaled Euclidean, so the plain
        // Euclidean CG of the Helmholtz module applies unchanged.
        self.operator.solve(rhs, guess).map(|s| s.field.values)
    }

    fn tolerance(&self) -> f64 {
        self.operator.config().rel_tolerance
    }
}
