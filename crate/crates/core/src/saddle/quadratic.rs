use super::problem::SaddleProblem;
use crate::projections::Projector;
use crate::vector::dot;

/// Dense test problem with quadratic `F(u) = μ_f/2 ‖u − f‖²`,
/// `G(p) = μ_g/2 ‖p − g‖²` and closed-form constraint sets.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    rows: usize,
    cols: usize,
    /// Row-major `rows × cols`.
    a: Vec<f64>,
    f_weight: f64,
    f_center: Vec<f64>,
    g_weight: f64,
    g_center: Vec<f64>,
    c: Projector,
    k: Projector,
    norm_a: f64,
}

impl QuadraticProblem {
    /// Bilinear problem with `F = G = 0` over the whole spaces. The norm
    /// bound defaults to the Frobenius norm of `A`.
    pub fn new(rows: usize, cols: usize, a: Vec<f64>) -> Self {
        assert_eq!(a.len(), rows * cols, "matrix must be rows*cols row-major");
        let norm_a = dot(&a, &a).sqrt();
        Self {
            rows,
            cols,
            a,
            f_weight: 0.0,
            f_center: vec![0.0; cols],
            g_weight: 0.0,
            g_center: vec![0.0; rows],
            c: Projector::whole_space(),
            k: Projector::whole_space(),
            norm_a,
        }
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut a = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            a[i * n + i] = *d;
        }
        Self::new(n, n, a)
    }

    pub fn with_f(mut self, weight: f64, center: Vec<f64>) -> Self {
        assert_eq!(center.len(), self.cols);
        self.f_weight = weight;
        self.f_center = center;
        self
    }

    pub fn with_g(mut self, weight: f64, center: Vec<f64>) -> Self {
        assert_eq!(center.len(), self.rows);
        self.g_weight = weight;
        self.g_center = center;
        self
    }

    pub fn with_constraints(mut self, c: Projector, k: Projector) -> Self {
        self.c = c;
        self.k = k;
        self
    }

    pub fn with_norm_a(mut self, norm_a: f64) -> Self {
        self.norm_a = norm_a;
        self
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn primal_set(&self) -> &Projector {
        &self.c
    }

    pub fn dual_set(&self) -> &Projector {
        &self.k
    }
}

impl SaddleProblem for QuadraticProblem {
    fn primal_dim(&self) -> usize {
        self.cols
    }

    fn dual_dim(&self) -> usize {
        self.rows
    }

    fn apply_a(&self, u: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.a[i * self.cols..(i + 1) * self.cols], u);
        }
    }

    fn apply_a_adjoint(&self, p: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (i, pi) in p.iter().enumerate() {
            for (o, aij) in out.iter_mut().zip(&self.a[i * self.cols..(i + 1) * self.cols]) {
                *o += aij * pi;
            }
        }
    }

    fn grad_f(&self, u: &[f64], out: &mut [f64]) {
        for ((o, ui), fi) in out.iter_mut().zip(u).zip(&self.f_center) {
            *o = self.f_weight * (ui - fi);
        }
    }

    fn grad_g(&self, p: &[f64], out: &mut [f64]) {
        for ((o, pi), gi) in out.iter_mut().zip(p).zip(&self.g_center) {
            *o = self.g_weight * (pi - gi);
        }
    }

    fn lipschitz_f(&self) -> f64 {
        self.f_weight
    }

    fn lipschitz_g(&self) -> f64 {
        self.g_weight
    }

    fn norm_a(&self) -> f64 {
        self.norm_a
    }

    fn project_c(&self, u: &mut [f64]) {
        self.c.project_in_place(u);
    }

    fn project_k(&self, p: &mut [f64]) {
        self.k.project_in_place(p);
    }

    fn lagrangian(&self, u: &[f64], p: &[f64]) -> Option<f64> {
        let mut au = vec![0.0; self.rows];
        self.apply_a(u, &mut au);
        let f: f64 = u.iter().zip(&self.f_center).map(|(a, b)| (a - b) * (a - b)).sum();
        let g: f64 = p.iter().zip(&self.g_center).map(|(a, b)| (a - b) * (a - b)).sum();
        Some(dot(&au, p) + 0.5 * self.f_weight * f - 0.5 * self.g_weight * g)
    }
}
