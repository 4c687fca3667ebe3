//! Ideal gamma-law equation of state in (p, S) variables.
//!
//! The closure is p = exp(S + entropy_ref) * rho^gamma; density is obtained
//! by inverting it, and internal energy, enthalpy and the two sound speeds
//! follow algebraically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closure family tag. Only the ideal gamma-law closure is implemented.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EosKind {
    #[default]
    #[serde(rename = "ideal-gamma-law")]
    IdealGammaLaw,
}

/// Ideal gamma-law closure with entropy as a primitive variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EosModel {
    #[serde(default)]
    pub kind: EosKind,
    /// Adiabatic exponent; must exceed 1.
    pub gamma: f64,
    /// Constant offset added to S inside the closure exponential.
    #[serde(default)]
    pub entropy_ref: f64,
}

/// Thermodynamic bundle evaluated at fixed (p, S).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thermo {
    /// Mass density rho.
    pub rho: f64,
    /// Specific internal energy e.
    pub e: f64,
    /// Specific enthalpy h = 1 + e + p/rho.
    pub h: f64,
    /// Isentropic pressure derivative a^2 = dp/drho|_S.
    pub a2: f64,
    /// Squared relativistic sound speed c_s^2 = a^2/h; must stay below 1.
    pub cs2: f64,
}

impl EosModel {
    pub fn new(gamma: f64) -> Result<Self> {
        Self {
            kind: EosKind::IdealGammaLaw,
            gamma,
            entropy_ref: 0.0,
        }
        .validated()
    }

    pub fn with_entropy_ref(gamma: f64, entropy_ref: f64) -> Result<Self> {
        Self {
            kind: EosKind::IdealGammaLaw,
            gamma,
            entropy_ref,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.gamma > 1.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidGamma { gamma: self.gamma });
        }
        if !self.entropy_ref.is_finite() {
            return Err(Error::InvalidInput(format!(
                "entropy_ref must be finite, got {}",
                self.entropy_ref
            )));
        }
        Ok(self)
    }

    /// Density from the inverted closure, rho = (p e^{-(S + entropy_ref)})^{1/gamma}.
    pub fn density(&self, p: f64, s: f64) -> Result<f64> {
        self.validated()?;
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::NonPositivePressure { p });
        }
        Ok((p * (-(s + self.entropy_ref)).exp()).powf(1.0 / self.gamma))
    }

    /// The closure itself, p = exp(S + entropy_ref) * rho^gamma.
    pub fn pressure(&self, rho: f64, s: f64) -> f64 {
        (s + self.entropy_ref).exp() * rho.powf(self.gamma)
    }

    /// Full thermodynamic bundle at (p, S).
    pub fn thermo(&self, p: f64, s: f64) -> Result<Thermo> {
        let rho = self.density(p, s)?;
        let g = self.gamma;
        let e = p / ((g - 1.0) * rho);
        let h = 1.0 + e + p / rho;
        let a2 = g * p / rho;
        let cs2 = a2 / h;
        if cs2 >= 1.0 {
            return Err(Error::CausalityViolation { cs2 });
        }
        Ok(Thermo { rho, e, h, a2, cs2 })
    }
}
