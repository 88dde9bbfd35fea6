//! Numerical laboratory for functional relations derived from the
//! (dynamical) Yang-Baxter algebra.
//!
//! The crate builds the elliptic SOS R-matrix and its six-vertex limit,
//! assembles monodromy operators on small spin chains, evaluates the
//! domain-wall partition function and off-shell scalar products by brute
//! force, evaluates their multiple-contour-integral representations as
//! residue sums, and checks the functional and partial differential
//! equations these quantities obey.

pub mod error;
pub mod feq;
pub mod lattice;
pub mod model;
pub mod operator;
pub mod pde;
pub mod poly;
pub mod residue;
pub mod sampler;
pub mod special;
pub mod yb;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use lattice::{BoundaryVectors, SetLabel, SpectralSet};

pub use model::{worst, ModelContext, TolerancePolicy};
pub use operator::ChainOperator;
pub use poly::MultiPoly;

pub use special::{EllipticParams, Regime};

/// Magnitude below which a weight in a denominator is treated as a pole.
pub const POLE_FLOOR: f64 = 1e-12;
