//! Primal-dual solvers for saddle-point problems
//! `inf_{u∈C} sup_{p∈K} <Au, p> + F(u) − G(p)` and their application to the
//! torsion-rod design problem on staggered grids.

pub mod error;
pub mod grid;
pub mod helmholtz;
pub mod krylov;
pub mod projections;
pub mod saddle;
pub mod semi_implicit;
pub mod torsion;
pub mod vector;

pub use error::{Error, Result};

