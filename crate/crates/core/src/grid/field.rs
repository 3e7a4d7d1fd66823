use super::GridSpec;
use crate::error::{Error, Result};

/// Cell-centered grid function, row-major with `y` as the outer index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { values: vec![0.0; grid.scalar_len()], grid }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.scalar_len() {
            return Err(Error::DimensionMismatch { expected: grid.scalar_len(), found: values.len() });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at cell centers.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n_cells();
        let mut values = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let (x, y) = grid.cell_center(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n_cells() + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.grid.n_cells();
        self.values[j * n + i] = v;
    }

    /// Discrete L² product `h² Σ u v`.
    pub fn dot(&self, other: &Self) -> f64 {
        scalar_dot(&self.grid, &self.values, &other.values)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// Face-centered vector field: `comp1` on the `(N+1) × N` vertical faces,
/// `comp2` on the `N × (N+1)` horizontal faces, both row-major in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField {
    pub grid: GridSpec,
    pub comp1: Vec<f64>,
    pub comp2: Vec<f64>,
}

impl FaceField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { comp1: vec![0.0; grid.comp1_len()], comp2: vec![0.0; grid.comp2_len()], grid }
    }

    /// Splits a flat `comp1 ++ comp2` vector.
    pub fn from_flat(grid: GridSpec, flat: &[f64]) -> Result<Self> {
        if flat.len() != grid.face_len() {
            return Err(Error::DimensionMismatch { expected: grid.face_len(), found: flat.len() });
        }
        let (a, b) = flat.split_at(grid.comp1_len());
        Ok(Self { grid, comp1: a.to_vec(), comp2: b.to_vec() })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.grid.face_len());
        v.extend_from_slice(&self.comp1);
        v.extend_from_slice(&self.comp2);
        v
    }

    /// `comp1` at vertical face `i ∈ 0..=N`, row `j`.
    pub fn p1(&self, i: usize, j: usize) -> f64 {
        self.comp1[j * (self.grid.n_cells() + 1) + i]
    }

    /// `comp2` at column `i`, horizontal face `j ∈ 0..=N`.
    pub fn p2(&self, i: usize, j: usize) -> f64 {
        self.comp2[j * self.grid.n_cells() + i]
    }

    /// Weighted product `h² Σ w_f p q`.
    pub fn dot(&self, other: &Self) -> f64 {
        face_dot(&self.grid, &self.to_flat(), &other.to_flat())
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Zeroes the mirror-line traces `p1(0,·)` and `p2(·,0)` when the grid
    /// has symmetry active.
    pub fn enforce_traces(&mut self) {
        if self.grid.symmetry() {
            zero_symmetry_faces(&self.grid, &mut self.comp1, &mut self.comp2);
        }
    }
}

pub(crate) fn zero_symmetry_faces(grid: &GridSpec, comp1: &mut [f64], comp2: &mut [f64]) {
    let n = grid.n_cells();
    for j in 0..n {
        comp1[j * (n + 1)] = 0.0;
    }
    comp2[..n].fill(0.0);
}

pub(crate) fn scalar_dot(grid: &GridSpec, a: &[f64], b: &[f64]) -> f64 {
    let h = grid.h();
    h * h * crate::vector::dot(a, b)
}

pub(crate) fn face_dot(grid: &GridSpec, a: &[f64], b: &[f64]) -> f64 {
    let n = grid.n_cells();
    let h = grid.h();
    let (a1, a2) = a.split_at(grid.comp1_len());
    let (b1, b2) = b.split_at(grid.comp1_len());
    let mut sum = 0.0;
    for j in 0..n {
        for i in 0..=n {
            let k = j * (n + 1) + i;
            sum += grid.face_weight(i) * a1[k] * b1[k];
        }
    }
    for j in 0..=n {
        let w = grid.face_weight(j);
        let row = j * n..(j + 1) * n;
        sum += w * crate::vector::dot(&a2[row.clone()], &b2[row]);
    }
    h * h * sum
}
