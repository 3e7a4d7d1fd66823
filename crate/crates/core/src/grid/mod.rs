//! Staggered (MAC) grids on the square: scalars at cell centers, the two
//! flux components on vertical and horizontal faces.
//!
//! The face inner product weights boundary faces by one half (they own
//! half a control volume) and symmetry faces by zero. With that weight the
//! one-sided boundary difference `±2u/h` and the plain two-point
//! divergence are exact negative adjoints of each other.

mod field;
mod io;
mod ops;

pub use field::{FaceField, ScalarField};
pub(crate) use field::face_dot;
pub use ops::{
    adjointness_gap, check_adjointness, divergence, divergence_into, divergence_with, gradient,
    gradient_into, mask_disk, operator_norm_bound, power_iteration_norm, Closure,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[0,1]²`, homogeneous Dirichlet on all four edges.
    UnitSquare,
    /// `[0,0.5]²`; with symmetry active the edges `x=0` and `y=0` are
    /// mirror lines and Dirichlet holds on `x=0.5`, `y=0.5`.
    QuarterSquare,
    /// Disk embedded in `[0,1]²`; cells outside it are pinned to zero.
    DiskInSquare { radius: f64, center: (f64, f64) },
}

impl Domain {
    pub fn side_length(&self) -> f64 {
        match self {
            Domain::QuarterSquare => 0.5,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n_cells: usize,
    domain: Domain,
    symmetry: bool,
}

impl GridSpec {
    pub fn new(n_cells: usize, domain: Domain, symmetry: bool) -> Result<Self> {
        if n_cells < 3 {
            return Err(Error::InvalidGrid(format!("need at least 3 cells per axis, got {n_cells}")));
        }
        if symmetry && domain != Domain::QuarterSquare {
            return Err(Error::InvalidGrid("symmetry requires the quarter domain".into()));
        }
        if let Domain::DiskInSquare { radius, center } = domain {
            check_disk(radius, center, domain.side_length())?;
        }
        Ok(Self { n_cells, domain, symmetry })
    }

    pub fn unit_square(n_cells: usize) -> Result<Self> {
        Self::new(n_cells, Domain::UnitSquare, false)
    }

    /// Quarter domain with the mirror boundary conditions active.
    pub fn quarter(n_cells: usize) -> Result<Self> {
        Self::new(n_cells, Domain::QuarterSquare, true)
    }

    pub fn disk(n_cells: usize, radius: f64, center: (f64, f64)) -> Result<Self> {
        Self::new(n_cells, Domain::DiskInSquare { radius, center }, false)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn symmetry(&self) -> bool {
        self.symmetry
    }

    pub fn side_length(&self) -> f64 {
        self.domain.side_length()
    }

    pub fn h(&self) -> f64 {
        self.side_length() / self.n_cells as f64
    }

    /// Area of the computational square.
    pub fn area(&self) -> f64 {
        self.side_length() * self.side_length()
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        let h = self.h();
        ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
    }

    pub fn scalar_len(&self) -> usize {
        self.n_cells * self.n_cells
    }

    /// Vertical faces, `(N+1) × N`.
    pub fn comp1_len(&self) -> usize {
        (self.n_cells + 1) * self.n_cells
    }

    /// Horizontal faces, `N × (N+1)`.
    pub fn comp2_len(&self) -> usize {
        self.n_cells * (self.n_cells + 1)
    }

    pub fn face_len(&self) -> usize {
        self.comp1_len() + self.comp2_len()
    }

    /// Inner-product weight of the face at normal index `k ∈ 0..=N`.
    pub fn face_weight(&self, k: usize) -> f64 {
        if k == 0 {
            if self.symmetry {
                0.0
            } else {
                0.5
            }
        } else if k == self.n_cells {
            0.5
        } else {
            1.0
        }
    }

    /// Whether each cell belongs to the physical domain.
    pub fn active_cells(&self) -> Vec<bool> {
        match self.domain {
            Domain::DiskInSquare { radius, center } => {
                let n = self.n_cells;
                let mut active = vec![false; n * n];
                for j in 0..n {
                    for i in 0..n {
                        let (x, y) = self.cell_center(i, j);
                        active[j * n + i] = (x - center.0).hypot(y - center.1) < radius;
                    }
                }
                active
            }
            _ => vec![true; self.scalar_len()],
        }
    }

    /// Measure of the physical domain.
    pub fn domain_area(&self) -> f64 {
        match self.domain {
            Domain::DiskInSquare { radius, .. } => std::f64::consts::PI * radius * radius,
            _ => self.area(),
        }
    }
}

fn check_disk(radius: f64, center: (f64, f64), side: f64) -> Result<()> {
    let inside = radius >= 0.0
        && center.0 - radius >= 0.0
        && center.0 + radius <= side
        && center.1 - radius >= 0.0
        && center.1 + radius <= side;
    if inside {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!(
            "disk of radius {radius} at {center:?} is not contained in the square"
        )))
    }
}
