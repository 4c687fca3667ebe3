//! Conservation-law side of the system: conserved densities, fluxes, the
//! stress-energy tensor, finite-difference quasilinear Jacobians, and the
//! equivalence oracle checking that the symmetric quadruples reproduce the
//! conservative dynamics on constraint-respecting derivative data.
//!
//! The Jacobians are deliberately numerical (central differences with a
//! Richardson half-step guard) so the oracle shares no code with the
//! hand-assembled dyadics it is testing.
//!
//! Conserved ordering: (mass; momentum 1..3; energy; field 1..3).

use nalgebra::Matrix4;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::PrimitiveState;
use crate::sym_primary::MatrixQuadruple;
use crate::{Matrix8, Vector8};

/// Residual threshold for the equivalence oracle; dominated by the accuracy
/// of the finite-difference Jacobians.
pub const RESIDUAL_TOL: f64 = 1e-5;

const FD_STEP: f64 = 1e-6;
const RICHARDSON_LIMIT: f64 = 1e-5;

/// Conserved densities W(U) = (rho Gamma; rho h Gamma u + |H|^2 v - (v,H) H;
/// rho h Gamma^2 + |H|^2 - q; H).
pub fn conserved(st: &PrimitiveState) -> Result<Vector8> {
    let d = st.derive()?;
    let hf = st.h;
    let vh = d.v.dot(&hf);
    let momentum = d.rho * d.h * d.gamma * st.u + hf.norm_squared() * d.v - vh * hf;

    let mut w = Vector8::zeros();
    w[0] = d.rho * d.gamma;
    for i in 0..3 {
        w[1 + i] = momentum[i];
        w[5 + i] = hf[i];
    }
    w[4] = d.rho * d.h * d.gamma * d.gamma + hf.norm_squared() - d.q;
    Ok(w)
}

/// Flux of the conserved densities along `axis`: mass rho u_j, momentum
/// (rho h + B^2) u_j u_i - b_j b_i + q delta_ij, energy equal to the
/// momentum density component, and the curl structure v_j H_k - v_k H_j
/// for the field rows.
pub fn flux(st: &PrimitiveState, axis: usize) -> Result<Vector8> {
    let d = st.derive()?;
    let hf = st.h;
    let vh = d.v.dot(&hf);
    let uj = st.u[axis];
    let vj = d.v[axis];

    let mut f = Vector8::zeros();
    f[0] = d.rho * uj;
    for i in 0..3 {
        let diag = if i == axis { d.q } else { 0.0 };
        f[1 + i] = (d.rho * d.h + d.b2) * uj * st.u[i] - d.b[axis] * d.b[i] + diag;
        f[5 + i] = vj * hf[i] - d.v[i] * hf[axis];
    }
    f[4] = d.rho * d.h * d.gamma * uj + hf.norm_squared() * vj - vh * hf[axis];
    Ok(f)
}

/// Stress-energy tensor T = (rho h + B^2) u (x) u + q g - b (x) b with
/// 4-velocity (Gamma, u), rest-frame field 4-vector (b0, b) and metric
/// signature (-,+,+,+). Independent route to the momentum/energy entries
/// of `conserved` and `flux`.
pub fn stress_energy(st: &PrimitiveState) -> Result<Matrix4<f64>> {
    let d = st.derive()?;
    let u4 = [d.gamma, st.u[0], st.u[1], st.u[2]];
    let b4 = [d.b0, d.b[0], d.b[1], d.b[2]];
    let wgt = d.rho * d.h + d.b2;
    let mut t = Matrix4::zeros();
    for alpha in 0..4 {
        for beta in 0..4 {
            let metric = if alpha != beta {
                0.0
            } else if alpha == 0 {
                -1.0
            } else {
                1.0
            };
            t[(alpha, beta)] = wgt * u4[alpha] * u4[beta] + d.q * metric - b4[alpha] * b4[beta];
        }
    }
    Ok(t)
}

/// Jacobians of the conservation-law form: B0 = dW/dU and B_j = dF_j/dU.
#[derive(Clone, Copy, Debug)]
pub struct QuasilinearJacobians {
    pub b0: Matrix8,
    pub b: [Matrix8; 3],
}

fn fd_jacobians(st: &PrimitiveState, step: f64) -> Result<QuasilinearJacobians> {
    let base = st.components();
    let mut b0 = Matrix8::zeros();
    let mut b = [Matrix8::zeros(); 3];
    for k in 0..8 {
        let delta = step * base[k].abs().max(1.0);
        let mut up = base;
        up[k] += delta;
        let mut dn = base;
        dn[k] -= delta;
        let sp = PrimitiveState::from_components(&up, st.eos);
        let sn = PrimitiveState::from_components(&dn, st.eos);
        let wp = conserved(&sp)?;
        let wn = conserved(&sn)?;
        let inv = 1.0 / (2.0 * delta);
        for r in 0..8 {
            b0[(r, k)] = (wp[r] - wn[r]) * inv;
        }
        for j in 0..3 {
            let fp = flux(&sp, j)?;
            let fnn = flux(&sn, j)?;
            for r in 0..8 {
                b[j][(r, k)] = (fp[r] - fnn[r]) * inv;
            }
        }
    }
    Ok(QuasilinearJacobians { b0, b })
}

/// Central-difference Jacobians with per-component step
/// delta_k = 1e-6 max(1, |U_k|), guarded by a half-step Richardson
/// comparison.
pub fn quasilinear_jacobians(st: &PrimitiveState) -> Result<QuasilinearJacobians> {
    let full = fd_jacobians(st, FD_STEP)?;
    let half = fd_jacobians(st, FD_STEP / 2.0)?;
    let scale = full
        .b0
        .abs()
        .max()
        .max(full.b.iter().map(|m| m.abs().max()).fold(0.0, f64::max))
        .max(1.0);
    let mut disagreement = (full.b0 - half.b0).abs().max();
    for j in 0..3 {
        disagreement = disagreement.max((full.b[j] - half.b[j]).abs().max());
    }
    disagreement /= scale;
    if disagreement > RICHARDSON_LIMIT {
        return Err(Error::FiniteDifferenceUnstable {
            disagreement,
            limit: RICHARDSON_LIMIT,
        });
    }
    Ok(full)
}

/// Random spatial derivative triple (d1 U, d2 U, d3 U) with the field
/// diagonal projected so that d1 H1 + d2 H2 + d3 H3 = `div_violation`
/// (zero for constraint-respecting data).
pub fn draw_constrained_derivatives(
    rng: &mut ChaCha8Rng,
    div_violation: f64,
) -> [Vector8; 3] {
    let mut d = [Vector8::zeros(); 3];
    for der in d.iter_mut() {
        for k in 0..8 {
            der[k] = rng.gen_range(-1.0..1.0);
        }
    }
    let trace: f64 = (0..3).map(|j| d[j][4 + j]).sum();
    let shift = (trace - div_violation) / 3.0;
    for (j, der) in d.iter_mut().enumerate() {
        der[4 + j] -= shift;
    }
    d
}

/// Relative residual of the symmetric system on one derivative triple:
/// the time derivative is solved from the conservative form, substituted
/// into A0 dtU + sum A_j djU, and normalized by sum ||A_j||_F ||djU||.
pub fn equivalence_residual(
    quad: &MatrixQuadruple,
    jac: &QuasilinearJacobians,
    derivs: &[Vector8; 3],
) -> Result<f64> {
    let mut rhs = Vector8::zeros();
    for j in 0..3 {
        rhs += jac.b[j] * derivs[j];
    }
    let dt_u = -jac
        .b0
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidInput("singular temporal Jacobian".into()))?;

    let mut r = quad.a0 * dt_u;
    let mut scale = 0.0;
    for j in 0..3 {
        r += quad.a[j] * derivs[j];
        scale += quad.a[j].norm() * derivs[j].norm();
    }
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(r.norm() / scale)
}

/// Aggregate oracle outcome over a batch of derivative draws.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ResidualReport {
    pub trials: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub failures: usize,
}

/// Run `trials` constrained random derivative draws against the quadruple
/// and report max/mean residuals; `failures` counts draws above
/// `RESIDUAL_TOL`. Nonzero `div_violation` turns the oracle into the
/// constraint-sensitivity control.
pub fn equivalence_oracle(
    st: &PrimitiveState,
    quad: &MatrixQuadruple,
    trials: usize,
    seed: u64,
    div_violation: f64,
) -> Result<ResidualReport> {
    let jac = quasilinear_jacobians(st)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    let mut sum = 0.0;
    let mut failures = 0;
    for _ in 0..trials {
        let derivs = draw_constrained_derivatives(&mut rng, div_violation);
        let res = equivalence_residual(quad, &jac, &derivs)?;
        max_residual = max_residual.max(res);
        sum += res;
        if res > RESIDUAL_TOL {
            failures += 1;
        }
    }
    Ok(ResidualReport {
        trials,
        max_residual,
        mean_residual: if trials == 0 { 0.0 } else { sum / trials as f64 },
        failures,
    })
}
