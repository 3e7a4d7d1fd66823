//! Optimal design of thin torsion rods through the regularized dual problem
//! `min ∫φ*(p)` subject to `−Div p = λ`, solved as a saddle problem on MAC
//! grids with three schemes:
//!
//! * **ES**: explicit primal-dual iteration, steps limited by `c_h = 2√2/h`;
//! * **IS**: semi-implicit iteration, primal direction `(I − Δ^h)⁻¹(Div p + λ)`;
//! * **ISS**: IS with `κ` explicit dual sub-steps per outer iteration.

mod diagnostics;
mod integrand;
mod problem;
mod schemes;

use std::fmt;
use std::str::FromStr;

pub use diagnostics::{
    cell_gradient, check_optimality, dual_energy, extract_radii, gradient_magnitude, primal_energy,
    OptimalityReport, Radii,
};
pub use integrand::{dphi_star_eps, phi, phi_star, phi_star_eps, regularized_lipschitz};
pub use problem::{cells_to_faces, faces_to_cells, HelmholtzInner, TorsionProblem};
pub use schemes::{derive_steps, residual, run_scheme, validate_scheme_steps, TorsionResult};

use crate::error::{Error, Result};
use crate::grid::{Domain, GridSpec};
use crate::helmholtz::{HelmholtzConfig, Preconditioner, DEFAULT_REL_TOLERANCE};
use crate::saddle::StepParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Explicit,
    Implicit,
    ImplicitSubiterated,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Explicit, Scheme::Implicit, Scheme::ImplicitSubiterated];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::Explicit => "ES",
            Scheme::Implicit => "IS",
            Scheme::ImplicitSubiterated => "ISS",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "es" => Ok(Scheme::Explicit),
            "is" => Ok(Scheme::Implicit),
            "iss" => Ok(Scheme::ImplicitSubiterated),
            other => Err(Error::Parse(format!("unknown scheme `{other}` (expected es, is or iss)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepChoice {
    Auto,
    Manual(StepParams),
}

/// Inner Helmholtz solve settings for IS and ISS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSettings {
    pub rel_tolerance: f64,
    pub max_iters: usize,
    pub preconditioner: Preconditioner,
}

impl Default for InnerSettings {
    fn default() -> Self {
        Self { rel_tolerance: DEFAULT_REL_TOLERANCE, max_iters: 20_000, preconditioner: Preconditioner::None }
    }
}

pub const DEFAULT_KAPPA: usize = 50;
pub const DEFAULT_STOP_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_MAX_OUTER_ITERS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionConfig {
    /// Multiplier in `−Div p = λ`.
    pub lambda: f64,
    /// Width of the regularization ramp.
    pub epsilon: f64,
    pub scheme: Scheme,
    /// Dual sub-steps per outer iteration (ISS only).
    pub kappa: usize,
    pub steps: StepChoice,
    pub stop_tolerance: f64,
    pub max_outer_iters: usize,
    pub grid: GridSpec,
    pub inner: InnerSettings,
}

impl TorsionConfig {
    /// Defaults: `ε = 3h`, `κ = 50`, automatic steps, tolerance `1e−4`.
    pub fn new(grid: GridSpec, lambda: f64, scheme: Scheme) -> Self {
        Self {
            lambda,
            epsilon: 3.0 * grid.h(),
            scheme,
            kappa: DEFAULT_KAPPA,
            steps: StepChoice::Auto,
            stop_tolerance: DEFAULT_STOP_TOLERANCE,
            max_outer_iters: DEFAULT_MAX_OUTER_ITERS,
            grid,
            inner: InnerSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason: String| Err(Error::InvalidConfig { field, reason });
        if !self.lambda.is_finite() {
            return bad("lambda", format!("must be finite, got {}", self.lambda));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return bad("epsilon", format!("must be positive, got {}", self.epsilon));
        }
        if self.kappa == 0 {
            return bad("kappa", "must be at least 1".into());
        }
        if !(self.stop_tolerance > 0.0) {
            return bad("stop_tolerance", format!("must be positive, got {}", self.stop_tolerance));
        }
        if self.max_outer_iters == 0 {
            return bad("max_outer_iters", "must be at least 1".into());
        }
        if let StepChoice::Manual(s) = self.steps {
            StepParams::new(s.alpha, s.beta)?;
        }
        self.helmholtz().validate()
    }

    pub fn helmholtz(&self) -> HelmholtzConfig {
        HelmholtzConfig {
            rel_tolerance: self.inner.rel_tolerance,
            max_iters: self.inner.max_iters,
            grid: self.grid,
            preconditioner: self.inner.preconditioner,
        }
    }
}

/// Which region a resolution-based grid covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    /// `[0, 0.5]²` with mirror conditions on `x = 0` and `y = 0`.
    Quarter,
    /// The full unit square.
    Square,
    /// Disk of radius 0.5 centered in the unit square.
    Disk,
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quarter" => Ok(DomainKind::Quarter),
            "square" => Ok(DomainKind::Square),
            "disk" => Ok(DomainKind::Disk),
            other => Err(Error::Parse(format!("unknown domain `{other}` (expected quarter, square or disk)"))),
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::Quarter => "quarter",
            DomainKind::Square => "square",
            DomainKind::Disk => "disk",
        })
    }
}

/// Grid at benchmark resolution `n`: `n` nodes across the computed
/// domain, i.e. `n − 1` cells per axis. The quarter domain thus has
/// `h = 0.5/(n − 1)`, the square and the disk `h = 1/(n − 1)`.
pub fn grid_for_resolution(n: usize, kind: DomainKind) -> Result<GridSpec> {
    if n < 4 {
        return Err(Error::InvalidGrid(format!("resolution {n} is too coarse")));
    }
    match kind {
        DomainKind::Square => GridSpec::unit_square(n - 1),
        DomainKind::Disk => GridSpec::disk(n - 1, 0.5, (0.5, 0.5)),
        DomainKind::Quarter => GridSpec::quarter(n - 1),
    }
}

/// Exact inner radius `2/λ` of the disk solution.
pub fn disk_inner_radius(lambda: f64) -> f64 {
    2.0 / lambda
}

pub(crate) fn disk_geometry(grid: &GridSpec) -> Option<(f64, (f64, f64))> {
    match grid.domain() {
        Domain::DiskInSquare { radius, center } => Some((radius, center)),
        _ => None,
    }
}
