//! Numerics for the generalized isotropic oscillator
//! `V = Σ_a [½Ω²x_a² + ½(k_a² − ¼)/x_a²]`.
//!
//! The crate is organized bottom-up:
//!
//! * [`special`]: log-gamma, classical orthogonal polynomials, terminating
//!   ₃F₂, Hahn polynomials and Golub–Welsch quadrature rules.
//! * [`model`]: system parameters, quantum-number labels, spectra and
//!   wavefunctions in Cartesian, polar, cylindrical and spherical coordinates.
//! * [`interbasis`]: Cartesian↔polar coefficients `W` by four independent
//!   routes, the cylindrical↔spherical `V`, the Cartesian↔spherical `C = W·V`
//!   and pointwise expansion.
//! * [`algebra`]: integrals of motion as matrices on degenerate eigenspaces
//!   and the quadratic / su(2) / su(1,1) identity checks.
//! * [`verify`]: seeded suites that run every property and emit reports.

pub mod algebra;
pub mod error;
pub mod interbasis;
pub mod model;
pub mod report;
pub mod special;
mod stencil;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Branch, CartesianState, CylindricalState, PolarState, SphericalState, SystemParams};
