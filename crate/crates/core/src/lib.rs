//! Ideal special-relativistic MHD in primitive variables, symmetric
//! quasilinear formulations, and linear stability of planar relativistic
//! current-vortex sheets.
//!
//! Conventions: units with c = 1, metric signature (-,+,+,+), state vector
//! ordered (p, u1, u2, u3, H1, H2, H3, S) where p is pressure, u = Gamma*v is
//! the spatial part of the 4-velocity, H is the lab-frame magnetic field and
//! S is specific entropy.

pub mod conservative;
pub mod cvs;
pub mod dump;
pub mod eos;
pub mod error;
pub mod lorentz;
pub mod sampling;
pub mod state;
pub mod sym_primary;
pub mod sym_secondary;

pub use error::{Error, Result};

/// 7x7 matrix on the (p, u, H) blocks (entropy row/column stripped).
pub type Matrix7 = nalgebra::SMatrix<f64, 7, 7>;
/// 8x8 matrix on the full (p, u, H, S) state.
pub type Matrix8 = nalgebra::SMatrix<f64, 8, 8>;
/// 7-component vector on the (p, u, H) blocks.
pub type Vector7 = nalgebra::SVector<f64, 7>;
/// 8-component state or perturbation vector.
pub type Vector8 = nalgebra::SVector<f64, 8>;

/// Names of the eight state components, in matrix row/column order.
pub const COMPONENT_NAMES: [&str; 8] = ["p", "u1", "u2", "u3", "H1", "H2", "H3", "S"];
