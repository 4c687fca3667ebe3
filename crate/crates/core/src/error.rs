//! Error taxonomy shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pressure must be positive, got {p}")]
    NonPositivePressure { p: f64 },

    #[error("adiabatic exponent must exceed 1, got {gamma}")]
    InvalidGamma { gamma: f64 },

    #[error("relativistic sound speed reaches light speed: c_s^2 = {cs2}")]
    CausalityViolation { cs2: f64 },

    #[error("3-velocity magnitude {speed} is not below 1")]
    SuperluminalVelocity { speed: f64 },

    #[error("finite-difference Jacobian unstable: half-step disagreement {disagreement} exceeds {limit}")]
    FiniteDifferenceUnstable { disagreement: f64, limit: f64 },

    #[error("tangential magnetic fields are degenerate: |H2+ H3- - H3+ H2-| = {det} is below {eps}")]
    DegenerateTangentialFields { det: f64, eps: f64 },

    #[error("tangential magnetic field vanishes on the {side} side")]
    ZeroTangentialField { side: &'static str },

    #[error("parameter map is singular: |1 + lambda_hat (v,H)| = {denom} is below 1e-12")]
    SingularMap { denom: f64 },

    #[error("lambda = {lambda} lies outside the hyperbolicity window (|lambda| < {bound})")]
    WindowViolation { lambda: f64, bound: f64 },

    #[error("sheet side violates the planar constraint: {which} = {value} must vanish")]
    SheetConstraint { which: &'static str, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
