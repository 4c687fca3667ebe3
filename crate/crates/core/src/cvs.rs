//! Linear stability evaluator for planar relativistic current-vortex
//! sheets.
//!
//! A sheet lies in the x2-x3 plane with normal e1; each side carries a state
//! with zero normal velocity and zero normal field. A sufficient stability
//! condition compares the tangential velocity jump against the tangential
//! field geometry through the margin
//!
//!   G = |sin dphi| min{gamma+ / |sin phi-|, gamma- / |sin phi+|} - |[v]|,
//!
//! where phi± are the angles between the velocity jump and the tangential
//! fields, dphi the angle between the two fields, and gamma± per-side
//! strengths built from the symmetrization window. G > 0 holds exactly when
//! the per-side parameters lambda-tilde± solved from the jump condition fit
//! inside their hyperbolicity windows, which is what makes the boundary form
//! dissipative.

use nalgebra::Vector2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{DerivedState, PrimitiveState};
use crate::sym_secondary::build_secondary;
use crate::Vector8;

/// Default absolute threshold on the tangential-field determinant.
pub const DEFAULT_DET_EPS: f64 = 1e-12;

const SHEET_TOL: f64 = 1e-12;

/// One side of a planar current-vortex sheet: a state with u1 = 0 and
/// H1 = 0 (within 1e-12), plus its derived quantities.
#[derive(Clone, Copy, Debug)]
pub struct SheetSide {
    pub state: PrimitiveState,
    pub derived: DerivedState,
}

impl SheetSide {
    pub fn new(state: PrimitiveState) -> Result<Self> {
        if state.u[0].abs() > SHEET_TOL {
            return Err(Error::SheetConstraint {
                which: "u1",
                value: state.u[0],
            });
        }
        if state.h[0].abs() > SHEET_TOL {
            return Err(Error::SheetConstraint {
                which: "H1",
                value: state.h[0],
            });
        }
        let derived = state.derive()?;
        Ok(SheetSide { state, derived })
    }

    /// Tangential magnetic field (components 2, 3).
    pub fn h_tangential(&self) -> Vector2<f64> {
        Vector2::new(self.state.h[1], self.state.h[2])
    }

    /// Tangential velocity (components 2, 3).
    pub fn v_tangential(&self) -> Vector2<f64> {
        Vector2::new(self.derived.v[1], self.derived.v[2])
    }

    /// Per-side bound on |lambda-tilde|: (1/Gamma^2) / (1/m + |(v,H)|)
    /// with m the symmetrization window bound.
    pub fn lambda_tilde_bound(&self) -> f64 {
        let d = &self.derived;
        let inv_m = (d.rho * d.a2 + d.b2).sqrt() / d.cs2.sqrt();
        let vh = d.v.dot(&self.state.h);
        (1.0 / (d.gamma * d.gamma)) / (inv_m + vh.abs())
    }

    /// Sheet strength gamma = |H_tangential| c_s (1 - v^2) /
    /// (sqrt(rho a^2 + B^2) + c_s |(v,H)|); equals |H_tangential| times the
    /// lambda-tilde bound.
    pub fn strength(&self) -> f64 {
        self.h_tangential().norm() * self.lambda_tilde_bound()
    }
}

fn wedge(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Full stability verdict for a sheet pair, with the intermediates needed
/// to trace or sweep the criterion. Index 0 is the plus side, 1 the minus
/// side. Angle entries are None when the tangential velocity jump vanishes.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StabilityReport {
    pub g: f64,
    pub det_tangential: f64,
    pub lambda_tilde: [f64; 2],
    pub lambda: [f64; 2],
    pub bounds: [f64; 2],
    pub nondegenerate: bool,
    pub stable: bool,
    pub windows_ok: bool,
    pub cos_phi: [Option<f64>; 2],
    pub sin_phi: [Option<f64>; 2],
    pub sin_dphi: f64,
}

fn tangential_det(plus: &SheetSide, minus: &SheetSide) -> f64 {
    wedge(&plus.h_tangential(), &minus.h_tangential())
}

fn check_tangential(plus: &SheetSide, minus: &SheetSide, det_eps: f64) -> Result<f64> {
    if plus.h_tangential().norm() == 0.0 {
        return Err(Error::ZeroTangentialField { side: "plus" });
    }
    if minus.h_tangential().norm() == 0.0 {
        return Err(Error::ZeroTangentialField { side: "minus" });
    }
    let det = tangential_det(plus, minus);
    if det.abs() < det_eps {
        return Err(Error::DegenerateTangentialFields {
            det: det.abs(),
            eps: det_eps,
        });
    }
    Ok(det)
}

/// Solve the jump condition [v] = lt+ H+ - lt- H- (tangential components)
/// for (lt+, lt-) by Cramer's rule.
pub fn solve_lambda_tilde(
    plus: &SheetSide,
    minus: &SheetSide,
    det_eps: f64,
) -> Result<(f64, f64)> {
    let det = check_tangential(plus, minus, det_eps)?;
    let dv = plus.v_tangential() - minus.v_tangential();
    let lt_plus = wedge(&dv, &minus.h_tangential()) / det;
    let lt_minus = wedge(&dv, &plus.h_tangential()) / det;
    Ok((lt_plus, lt_minus))
}

/// Map a per-side lambda-tilde back to the symmetrization parameter lambda:
/// lambda = Gamma^2 lt / (1 + Gamma^2 lt (v,H)).
pub fn lambda_from_tilde(side: &SheetSide, lambda_tilde: f64) -> Result<f64> {
    let d = &side.derived;
    let hat = d.gamma * d.gamma * lambda_tilde;
    let vh = d.v.dot(&side.state.h);
    let denom = 1.0 + hat * vh;
    if denom.abs() < 1e-12 {
        return Err(Error::SingularMap {
            denom: denom.abs(),
        });
    }
    Ok(hat / denom)
}

/// Forward map from lambda to lambda-tilde:
/// lt = lambda / (Gamma^2 (1 - lambda (v,H))).
pub fn tilde_from_lambda(side: &SheetSide, lambda: f64) -> Result<f64> {
    let d = &side.derived;
    let vh = d.v.dot(&side.state.h);
    let denom = d.gamma * d.gamma * (1.0 - lambda * vh);
    if denom.abs() < 1e-12 {
        return Err(Error::SingularMap {
            denom: denom.abs(),
        });
    }
    Ok(lambda / denom)
}

/// Evaluate the stability margin G and all intermediates for a sheet pair.
pub fn stability_margin(
    plus: &SheetSide,
    minus: &SheetSide,
    det_eps: f64,
) -> Result<StabilityReport> {
    let det = check_tangential(plus, minus, det_eps)?;
    let hp = plus.h_tangential();
    let hm = minus.h_tangential();
    let dv = plus.v_tangential() - minus.v_tangential();
    let dv_norm = dv.norm();

    let (lt_plus, lt_minus) = solve_lambda_tilde(plus, minus, det_eps)?;
    let lambda = [
        lambda_from_tilde(plus, lt_plus)?,
        lambda_from_tilde(minus, lt_minus)?,
    ];
    let bounds = [plus.lambda_tilde_bound(), minus.lambda_tilde_bound()];
    let windows_ok = lt_plus.abs() < bounds[0] && lt_minus.abs() < bounds[1];

    let strength = [plus.strength(), minus.strength()];
    let sin_dphi = det / (hp.norm() * hm.norm());

    let (g, cos_phi, sin_phi) = if dv_norm == 0.0 {
        // The angles to the velocity jump are undefined; the worst case of
        // the |sin phi| factors is 1, giving a conservative margin that is
        // still positive.
        let g = sin_dphi.abs() * strength[0].min(strength[1]);
        (g, [None, None], [None, None])
    } else {
        let cos_p = dv.dot(&hp) / (dv_norm * hp.norm());
        let cos_m = dv.dot(&hm) / (dv_norm * hm.norm());
        let sin_p = wedge(&dv, &hp) / (dv_norm * hp.norm());
        let sin_m = wedge(&dv, &hm) / (dv_norm * hm.norm());
        let t_plus = if sin_m == 0.0 {
            f64::INFINITY
        } else {
            strength[0] / sin_m.abs()
        };
        let t_minus = if sin_p == 0.0 {
            f64::INFINITY
        } else {
            strength[1] / sin_p.abs()
        };
        let g = sin_dphi.abs() * t_plus.min(t_minus) - dv_norm;
        (g, [Some(cos_p), Some(cos_m)], [Some(sin_p), Some(sin_m)])
    };

    Ok(StabilityReport {
        g,
        det_tangential: det,
        lambda_tilde: [lt_plus, lt_minus],
        lambda,
        bounds,
        nondegenerate: true,
        stable: g > 0.0,
        windows_ok,
        cos_phi,
        sin_phi,
        sin_dphi,
    })
}

/// Both evaluations of the boundary quadratic form at one sheet side:
/// `quadratic` contracts the x1 family matrix with the perturbation,
/// `closed` is 2 Gamma dq ((1 - lambda (v,H)) dv1 - (lambda/Gamma^2) dH1)
/// with dq the linearized total pressure.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryForm {
    pub quadratic: f64,
    pub closed: f64,
}

/// Linearized total-pressure perturbation dq = dp + (1/Gamma) ((b,dH) +
/// (v,H)(H,du) - B^2 (v,du)).
pub fn total_pressure_perturbation(side: &SheetSide, du: &Vector8) -> f64 {
    let d = &side.derived;
    let h = side.state.h;
    let du_vec = nalgebra::Vector3::new(du[1], du[2], du[3]);
    let dh_vec = nalgebra::Vector3::new(du[4], du[5], du[6]);
    let vh = d.v.dot(&h);
    du[0] + (d.b.dot(&dh_vec) + vh * h.dot(&du_vec) - d.b2 * d.v.dot(&du_vec)) / d.gamma
}

/// Evaluate the x1 boundary form of the lambda-family at a sheet side, both
/// as an explicit quadratic form and through its closed factored form.
pub fn boundary_form(side: &SheetSide, lambda: f64, du: &Vector8) -> Result<BoundaryForm> {
    let kit = build_secondary(&side.state, lambda)?;
    if lambda.abs() >= kit.window_bound {
        return Err(Error::WindowViolation {
            lambda,
            bound: kit.window_bound,
        });
    }
    let quadratic = (kit.quadruple.a[0] * du).dot(du);

    let d = &side.derived;
    let vh = d.v.dot(&side.state.h);
    let dq = total_pressure_perturbation(side, du);
    let dv1 = du[1] / d.gamma;
    let closed =
        2.0 * d.gamma * dq * ((1.0 - lambda * vh) * dv1 - lambda / (d.gamma * d.gamma) * du[4]);
    Ok(BoundaryForm { quadratic, closed })
}

/// Perturbation pair coupled through the linearized sheet conditions: a
/// common front gradient fixes the normal components on both sides and the
/// plus-side pressure is solved so the total-pressure perturbation matches.
#[derive(Clone, Copy, Debug)]
pub struct CoupledPerturbations {
    pub plus: Vector8,
    pub minus: Vector8,
}

/// Draw a random coupled perturbation pair. `front` are the (t, x2, x3)
/// derivatives of the front displacement, shared by both sides.
pub fn draw_coupled_perturbations(
    rng: &mut ChaCha8Rng,
    plus: &SheetSide,
    minus: &SheetSide,
) -> CoupledPerturbations {
    let front = [
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    ];
    let fill = |side: &SheetSide, rng: &mut ChaCha8Rng| {
        let mut du = Vector8::zeros();
        for k in [2usize, 3, 5, 6, 7] {
            du[k] = rng.gen_range(-1.0..1.0);
        }
        let d = &side.derived;
        // Normal velocity follows the front: dv1 = f_t + v2 f_2 + v3 f_3,
        // and du1 = Gamma dv1 on a sheet side.
        du[1] = d.gamma * (front[0] + d.v[1] * front[1] + d.v[2] * front[2]);
        // Zero normal field through the perturbed front.
        du[4] = side.state.h[1] * front[1] + side.state.h[2] * front[2];
        du
    };
    let mut minus_du = fill(minus, rng);
    minus_du[0] = rng.gen_range(-1.0..1.0);
    let mut plus_du = fill(plus, rng);

    // Match the total-pressure perturbation across the sheet.
    let dq_minus = total_pressure_perturbation(minus, &minus_du);
    plus_du[0] = 0.0;
    plus_du[0] = dq_minus - total_pressure_perturbation(plus, &plus_du);
    CoupledPerturbations {
        plus: plus_du,
        minus: minus_du,
    }
}

/// Weighted jump of the boundary form. `scale` is the beta-weighted
/// matrix/perturbation magnitude (robustly nonzero, for judging how well
/// the jump vanishes); `form_magnitude` is the summed size of the two
/// weighted forms themselves (the natural yardstick for detuning
/// sensitivity, since common factors in the forms cancel out of the ratio).
#[derive(Clone, Copy, Debug)]
pub struct BoundaryJump {
    pub jump: f64,
    pub scale: f64,
    pub form_magnitude: f64,
}

/// Evaluate beta+ (A1+ dU+, dU+) - beta- (A1- dU-, dU-) with
/// beta = 1/(Gamma (1 - lambda (v,H))). With lambda± induced by the
/// jump-condition solution and coupled perturbations, this vanishes.
pub fn dissipativity_jump(
    plus: &SheetSide,
    minus: &SheetSide,
    lambda: [f64; 2],
    perturbations: &CoupledPerturbations,
) -> Result<BoundaryJump> {
    let mut jump = 0.0;
    let mut scale = 0.0;
    let mut form_magnitude = 0.0;
    for (side, lam, du, sign) in [
        (plus, lambda[0], &perturbations.plus, 1.0),
        (minus, lambda[1], &perturbations.minus, -1.0),
    ] {
        let kit = build_secondary(&side.state, lam)?;
        if lam.abs() >= kit.window_bound {
            return Err(Error::WindowViolation {
                lambda: lam,
                bound: kit.window_bound,
            });
        }
        let d = &side.derived;
        let vh = d.v.dot(&side.state.h);
        let beta = 1.0 / (d.gamma * (1.0 - lam * vh));
        let form = (kit.quadruple.a[0] * du).dot(du);
        jump += sign * beta * form;
        scale += beta.abs() * kit.quadruple.a[0].norm() * du.norm_squared();
        form_magnitude += (beta * form).abs();
    }
    Ok(BoundaryJump {
        jump,
        scale,
        form_magnitude,
    })
}

/// Classical (non-relativistic) compressible current-vortex sheet data:
/// plain density, sound speed and 3-vector fields with vanishing normal
/// components.
#[derive(Clone, Copy, Debug)]
pub struct ClassicalSide {
    pub rho: f64,
    pub a2: f64,
    pub h: nalgebra::Vector3<f64>,
    pub v: nalgebra::Vector3<f64>,
}

/// Classical sufficient-stability margin, implemented independently of the
/// relativistic machinery: per-side strength |H_t| a / sqrt(rho a^2 + |H|^2)
/// combined over the same tangential geometry.
pub fn classical_margin(plus: &ClassicalSide, minus: &ClassicalSide) -> Result<f64> {
    let hp = Vector2::new(plus.h[1], plus.h[2]);
    let hm = Vector2::new(minus.h[1], minus.h[2]);
    if hp.norm() == 0.0 || hm.norm() == 0.0 {
        return Err(Error::ZeroTangentialField {
            side: if hp.norm() == 0.0 { "plus" } else { "minus" },
        });
    }
    let det = hp[0] * hm[1] - hp[1] * hm[0];
    if det == 0.0 {
        return Err(Error::DegenerateTangentialFields { det: 0.0, eps: 0.0 });
    }
    let strength = |side: &ClassicalSide, ht: &Vector2<f64>| {
        ht.norm() * side.a2.sqrt() / (side.rho * side.a2 + side.h.norm_squared()).sqrt()
    };
    let gp = strength(plus, &hp);
    let gm = strength(minus, &hm);
    let sin_dphi = det / (hp.norm() * hm.norm());

    let dv = Vector2::new(plus.v[1] - minus.v[1], plus.v[2] - minus.v[2]);
    let dv_norm = dv.norm();
    if dv_norm == 0.0 {
        return Ok(sin_dphi.abs() * gp.min(gm));
    }
    let sin_p = (dv[0] * hp[1] - dv[1] * hp[0]) / (dv_norm * hp.norm());
    let sin_m = (dv[0] * hm[1] - dv[1] * hm[0]) / (dv_norm * hm.norm());
    let t_plus = if sin_m == 0.0 {
        f64::INFINITY
    } else {
        gp / sin_m.abs()
    };
    let t_minus = if sin_p == 0.0 {
        f64::INFINITY
    } else {
        gm / sin_p.abs()
    };
    Ok(sin_dphi.abs() * t_plus.min(t_minus) - dv_norm)
}

impl From<&SheetSide> for ClassicalSide {
    fn from(side: &SheetSide) -> Self {
        ClassicalSide {
            rho: side.derived.rho,
            a2: side.derived.a2,
            h: side.state.h,
            v: side.derived.v,
        }
    }
}

/// Rebuild a sheet pair with prescribed tangential velocity jump magnitude
/// `dv` (split symmetrically about the original mean velocity along the
/// original jump direction, or e2 if the jump vanishes) and with the minus
/// field rotated to sit at angle `dphi` from the plus field, keeping both
/// field magnitudes. Used by parameter sweeps.
pub fn sweep_pair(
    plus: &SheetSide,
    minus: &SheetSide,
    dv: f64,
    dphi: f64,
) -> Result<(SheetSide, SheetSide)> {
    let vp = plus.v_tangential();
    let vm = minus.v_tangential();
    let mid = (vp + vm) / 2.0;
    let jump = vp - vm;
    let dir = if jump.norm() > 0.0 {
        jump / jump.norm()
    } else {
        Vector2::new(1.0, 0.0)
    };
    let v_new = [mid + dir * (dv / 2.0), mid - dir * (dv / 2.0)];
    if v_new[0].norm() >= 1.0 || v_new[1].norm() >= 1.0 {
        return Err(Error::SuperluminalVelocity {
            speed: v_new[0].norm().max(v_new[1].norm()),
        });
    }

    let hp = plus.h_tangential();
    let hp_unit = hp / hp.norm();
    let hm_mag = minus.h_tangential().norm();
    let rot = Vector2::new(
        hp_unit[0] * dphi.cos() - hp_unit[1] * dphi.sin(),
        hp_unit[0] * dphi.sin() + hp_unit[1] * dphi.cos(),
    );
    let h_new = [hp, rot * hm_mag];

    let rebuild = |old: &SheetSide, v: Vector2<f64>, h: Vector2<f64>| -> Result<SheetSide> {
        let gamma = 1.0 / (1.0 - v.norm_squared()).sqrt();
        let st = PrimitiveState::new(
            old.state.p,
            [0.0, gamma * v[0], gamma * v[1]],
            [0.0, h[0], h[1]],
            old.state.s,
            old.state.eos,
        );
        SheetSide::new(st)
    };
    Ok((
        rebuild(plus, v_new[0], h_new[0])?,
        rebuild(minus, v_new[1], h_new[1])?,
    ))
}
