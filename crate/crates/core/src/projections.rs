//! Orthogonal projectors onto the closed convex sets used by the solvers.
//!
//! Every projector here is closed-form: componentwise clamps, radial
//! scaling, or coordinate masks. The property checks mirror the three
//! classical facts about metric projections (firm nonexpansiveness, the
//! Pythagorean inequality when the set contains the origin, and
//! translation covariance) and are used directly by the test suites.

use crate::error::{Error, Result};
use crate::vector::{dot, norm};

/// Absolute slack for the inequality checks on unit-scale data.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SetDescriptor {
    WholeSpace,
    /// Per-component interval `[lower_i, upper_i]`; infinite bounds allowed.
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// Entries flagged `true` are forced to zero (Dirichlet trace).
    BoundaryTraceZero { mask: Vec<bool> },
    /// Listed coordinates are forced to zero.
    MaskZero { indices: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    descriptor: SetDescriptor,
}

impl Projector {
    pub fn new(descriptor: SetDescriptor) -> Result<Self> {
        match &descriptor {
            SetDescriptor::Box { lower, upper } => {
                if lower.len() != upper.len() {
                    return Err(Error::DimensionMismatch {
                        expected: lower.len(),
                        found: upper.len(),
                    });
                }
                if let Some(i) = lower
                    .iter()
                    .zip(upper)
                    .position(|(l, u)| l.is_nan() || u.is_nan() || l > u)
                {
                    return Err(Error::EmptySet(format!(
                        "box component {i} has lower {} > upper {}",
                        lower[i], upper[i]
                    )));
                }
            }
            SetDescriptor::Ball { center, radius } => {
                if !(*radius >= 0.0) || !radius.is_finite() {
                    return Err(Error::EmptySet(format!("ball radius {radius}")));
                }
                if !center.iter().all(|c| c.is_finite()) {
                    return Err(Error::NonFinite("ball center"));
                }
            }
            _ => {}
        }
        Ok(Self { descriptor })
    }

    pub fn whole_space() -> Self {
        Self { descriptor: SetDescriptor::WholeSpace }
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(SetDescriptor::Box { lower, upper })
    }

    /// Same interval `[lower, upper]` on each of `dim` components.
    pub fn uniform_box(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::boxed(vec![lower; dim], vec![upper; dim])
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        Self::new(SetDescriptor::Ball { center, radius })
    }

    pub fn mask_zero(indices: Vec<usize>) -> Self {
        Self { descriptor: SetDescriptor::MaskZero { indices } }
    }

    pub fn boundary_trace_zero(mask: Vec<bool>) -> Self {
        Self { descriptor: SetDescriptor::BoundaryTraceZero { mask } }
    }

    pub fn descriptor(&self) -> &SetDescriptor {
        &self.descriptor
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        self.project_in_place(&mut y);
        y
    }

    pub fn project_in_place(&self, x: &mut [f64]) {
        match &self.descriptor {
            SetDescriptor::WholeSpace => {}
            SetDescriptor::Box { lower, upper } => {
                debug_assert_eq!(x.len(), lower.len());
                for ((xi, l), u) in x.iter_mut().zip(lower).zip(upper) {
                    *xi = xi.clamp(*l, *u);
                }
            }
            SetDescriptor::Ball { center, radius } => {
                let dist = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum::<f64>()
                    .sqrt();
                if dist > *radius {
                    let scale = radius / dist;
                    for (xi, c) in x.iter_mut().zip(center) {
                        *xi = c + (*xi - c) * scale;
                    }
                }
            }
            SetDescriptor::BoundaryTraceZero { mask } => {
                for (xi, &m) in x.iter_mut().zip(mask) {
                    if m {
                        *xi = 0.0;
                    }
                }
            }
            SetDescriptor::MaskZero { indices } => {
                for &i in indices {
                    x[i] = 0.0;
                }
            }
        }
    }

    /// Membership test, exact for clamp and mask descriptors.
    pub fn contains(&self, x: &[f64]) -> bool {
        match &self.descriptor {
            SetDescriptor::WholeSpace => true,
            SetDescriptor::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (l, u))| l <= v && v <= u),
            SetDescriptor::Ball { center, radius } => {
                let d2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
                // radial scaling rounds in the coordinates, allow a few ulps
                let scale = radius + center.iter().map(|c| c.abs()).fold(1.0, f64::max);
                d2.sqrt() <= radius + 8.0 * f64::EPSILON * scale
            }
            SetDescriptor::BoundaryTraceZero { mask } => {
                x.iter().zip(mask).all(|(v, &m)| !m || *v == 0.0)
            }
            SetDescriptor::MaskZero { indices } => indices.iter().all(|&i| x[i] == 0.0),
        }
    }

    pub fn contains_origin(&self) -> bool {
        match &self.descriptor {
            SetDescriptor::Box { lower, upper } => {
                lower.iter().zip(upper).all(|(l, u)| *l <= 0.0 && 0.0 <= *u)
            }
            SetDescriptor::Ball { center, radius } => norm(center) <= *radius,
            _ => true,
        }
    }

    /// Projector onto the translated set `D - v`.
    ///
    /// Masks become degenerate boxes pinned at `-v_i` on the masked
    /// coordinates; the other descriptors keep their shape.
    pub fn translate(&self, v: &[f64]) -> Self {
        let descriptor = match &self.descriptor {
            SetDescriptor::WholeSpace => SetDescriptor::WholeSpace,
            SetDescriptor::Box { lower, upper } => SetDescriptor::Box {
                lower: lower.iter().zip(v).map(|(l, s)| l - s).collect(),
                upper: upper.iter().zip(v).map(|(u, s)| u - s).collect(),
            },
            SetDescriptor::Ball { center, radius } => SetDescriptor::Ball {
                center: center.iter().zip(v).map(|(c, s)| c - s).collect(),
                radius: *radius,
            },
            SetDescriptor::BoundaryTraceZero { mask } => pinned_box(v, |i| mask[i]),
            SetDescriptor::MaskZero { indices } => {
                let mut flags = vec![false; v.len()];
                for &i in indices {
                    flags[i] = true;
                }
                pinned_box(v, |i| flags[i])
            }
        };
        Self { descriptor }
    }
}

fn pinned_box(v: &[f64], pinned: impl Fn(usize) -> bool) -> SetDescriptor {
    let (lower, upper) = v
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if pinned(i) {
                (-s, -s)
            } else {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
        })
        .unzip();
    SetDescriptor::Box { lower, upper }
}

/// `<P(x) - P(y), x - y> >= ||P(x) - P(y)||^2 - tol`.
pub fn check_monotone(proj: &Projector, x: &[f64], y: &[f64], tol: f64) -> bool {
    let px = proj.project(x);
    let py = proj.project(y);
    let dp: Vec<f64> = px.iter().zip(&py).map(|(a, b)| a - b).collect();
    let dx: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    dot(&dp, &dx) >= dot(&dp, &dp) - tol
}

/// `||x - P(x)||^2 + ||P(x)||^2 <= ||x||^2 + tol`; requires `0 ∈ D`.
pub fn check_pythagorean(proj: &Projector, x: &[f64], tol: f64) -> Result<bool> {
    if !proj.contains_origin() {
        return Err(Error::OriginNotInSet);
    }
    let px = proj.project(x);
    let r2: f64 = x.iter().zip(&px).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(r2 + dot(&px, &px) <= dot(x, x) + tol)
}

/// Variational inequality `<x - P(x), z - P(x)>` for a feasible `z`; it is
/// nonpositive for the exact projection.
pub fn characterization_gap(proj: &Projector, x: &[f64], z: &[f64]) -> f64 {
    let px = proj.project(x);
    x.iter()
        .zip(z)
        .zip(&px)
        .map(|((xi, zi), pi)| (xi - pi) * (zi - pi))
        .sum()
}
