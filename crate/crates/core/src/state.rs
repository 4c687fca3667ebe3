//! Primitive state (p, u, H, S) and the kinematic/magnetic quantities
//! derived from it.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::eos::{EosModel, Thermo};
use crate::error::Result;

/// Primitive state: pressure, spatial 4-velocity u = Gamma*v, lab-frame
/// magnetic field H, and specific entropy, plus the closure that completes
/// the thermodynamics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "StateJson", into = "StateJson")]
pub struct PrimitiveState {
    pub p: f64,
    pub u: Vector3<f64>,
    pub h: Vector3<f64>,
    pub s: f64,
    pub eos: EosModel,
}

/// Wire format: {"p": .., "u": [..], "H": [..], "S": .., "eos": {"gamma": ..}}.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    p: f64,
    u: [f64; 3],
    #[serde(rename = "H")]
    h: [f64; 3],
    #[serde(rename = "S")]
    s: f64,
    eos: EosModel,
}

impl From<StateJson> for PrimitiveState {
    fn from(w: StateJson) -> Self {
        Self {
            p: w.p,
            u: Vector3::from(w.u),
            h: Vector3::from(w.h),
            s: w.s,
            eos: w.eos,
        }
    }
}

impl From<PrimitiveState> for StateJson {
    fn from(st: PrimitiveState) -> Self {
        Self {
            p: st.p,
            u: st.u.into(),
            h: st.h.into(),
            s: st.s,
            eos: st.eos,
        }
    }
}

/// Quantities derived from a primitive state: Lorentz factor, 3-velocity,
/// magnetic 4-vector components, rest-frame field strength, thermodynamics
/// and total pressure.
#[derive(Clone, Copy, Debug)]
pub struct DerivedState {
    /// Lorentz factor Gamma = sqrt(1 + |u|^2).
    pub gamma: f64,
    /// 3-velocity v = u / Gamma.
    pub v: Vector3<f64>,
    /// Time component of the magnetic 4-vector, b^0 = (u, H).
    pub b0: f64,
    /// Spatial components b_i = H_i/Gamma + (u, H) v_i.
    pub b: Vector3<f64>,
    /// B^2 = |b|^2 - (b^0)^2 = |H|^2/Gamma^2 + (v, H)^2.
    pub b2: f64,
    /// Mass density from the closure.
    pub rho: f64,
    /// Specific internal energy.
    pub e: f64,
    /// Specific enthalpy h = 1 + e + p/rho.
    pub h: f64,
    /// Isentropic pressure derivative a^2 = dp/drho|_S.
    pub a2: f64,
    /// Squared relativistic sound speed c_s^2 = a^2/h.
    pub cs2: f64,
    /// Total pressure q = p + B^2/2.
    pub q: f64,
}

/// Pointwise admissibility report: the three hyperbolicity inequalities
/// (rho > 0, dp/drho > 0, 0 < c_s^2 < 1) plus |v| < 1.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub rho: f64,
    pub a2: f64,
    pub cs2: f64,
    pub speed: f64,
    pub rho_positive: bool,
    pub pressure_derivative_positive: bool,
    pub causal: bool,
    pub subluminal: bool,
    /// Conjunction of the four flags above.
    pub admissible: bool,
}

impl PrimitiveState {
    pub fn new(p: f64, u: [f64; 3], h: [f64; 3], s: f64, eos: EosModel) -> Self {
        Self {
            p,
            u: Vector3::from(u),
            h: Vector3::from(h),
            s,
            eos,
        }
    }

    /// Components in matrix order (p, u1, u2, u3, H1, H2, H3, S).
    pub fn components(&self) -> [f64; 8] {
        [
            self.p, self.u[0], self.u[1], self.u[2], self.h[0], self.h[1], self.h[2], self.s,
        ]
    }

    /// Rebuild a state from components in matrix order, keeping this EOS.
    pub fn from_components(c: &[f64; 8], eos: EosModel) -> Self {
        Self {
            p: c[0],
            u: Vector3::new(c[1], c[2], c[3]),
            h: Vector3::new(c[4], c[5], c[6]),
            s: c[7],
            eos,
        }
    }

    /// Evaluate all derived quantities, failing on inadmissible thermodynamics.
    pub fn derive(&self) -> Result<DerivedState> {
        let Thermo { rho, e, h, a2, cs2 } = self.eos.thermo(self.p, self.s)?;
        let u = self.u;
        let hf = self.h;
        let gamma = (1.0 + u.norm_squared()).sqrt();
        let v = u / gamma;
        let b0 = u.dot(&hf);
        let b = hf / gamma + b0 * v;
        let vh = v.dot(&hf);
        let b2 = hf.norm_squared() / (gamma * gamma) + vh * vh;
        let q = self.p + 0.5 * b2;
        Ok(DerivedState {
            gamma,
            v,
            b0,
            b,
            b2,
            rho,
            e,
            h,
            a2,
            cs2,
            q,
        })
    }

    /// Pointwise hyperbolicity/admissibility check. Unlike `derive`, this
    /// reports failed inequalities instead of erroring on them.
    pub fn check_hyperbolic(&self) -> HyperbolicityReport {
        let g = self.eos.gamma;
        let (rho, a2, cs2) = match self.eos.density(self.p, self.s) {
            Ok(rho) => {
                let a2 = g * self.p / rho;
                let h = 1.0 + self.p / ((g - 1.0) * rho) + self.p / rho;
                (rho, a2, a2 / h)
            }
            Err(_) => (f64::NAN, f64::NAN, f64::NAN),
        };
        let gamma = (1.0 + self.u.norm_squared()).sqrt();
        let speed = self.u.norm() / gamma;
        let rho_positive = rho.is_finite() && rho > 0.0;
        let pressure_derivative_positive = a2.is_finite() && a2 > 0.0;
        let causal = cs2.is_finite() && cs2 > 0.0 && cs2 < 1.0;
        let subluminal = speed < 1.0;
        HyperbolicityReport {
            rho,
            a2,
            cs2,
            speed,
            rho_positive,
            pressure_derivative_positive,
            causal,
            subluminal,
            admissible: rho_positive && pressure_derivative_positive && causal && subluminal,
        }
    }
}

impl DerivedState {
    /// B^2 evaluated through the 4-vector route |b|^2 - (b^0)^2; agrees with
    /// the stored `b2` up to rounding and is kept as an independent check.
    pub fn b2_from_four_vector(&self) -> f64 {
        self.b.norm_squared() - self.b0 * self.b0
    }
}
