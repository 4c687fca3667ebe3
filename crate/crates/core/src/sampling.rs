//! Deterministic random generators for states, sheet sides, and
//! perturbations, shared by the verification suites and the CLI. Every
//! generator consumes a caller-seeded ChaCha stream, so identical seeds give
//! identical draws regardless of thread count or call site.

use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cvs::SheetSide;
use crate::eos::EosModel;
use crate::state::PrimitiveState;
use crate::Vector8;

/// Mix a trial index into a base seed; used to give parallel trials
/// independent, order-free streams.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn random_eos(rng: &mut ChaCha8Rng) -> EosModel {
    EosModel::new(rng.gen_range(1.3..2.0)).unwrap()
}

/// Moderately relativistic admissible state: |u| per component up to 2,
/// field up to 2, adiabatic index in (1.3, 2).
pub fn admissible_state(rng: &mut ChaCha8Rng) -> PrimitiveState {
    let eos = random_eos(rng);
    PrimitiveState::new(
        rng.gen_range(0.2..4.0),
        [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ],
        [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ],
        rng.gen_range(-0.5..0.5),
        eos,
    )
}

fn random_direction(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let d = Vector3::new(
            rng.gen_range(-1.0..1.0f64),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = d.norm();
        if n > 1e-3 {
            return d / n;
        }
    }
}

/// Strongly relativistic admissible state with |v| drawn up to `vmax`
/// (e.g. 0.99).
pub fn high_speed_state(rng: &mut ChaCha8Rng, vmax: f64) -> PrimitiveState {
    let eos = random_eos(rng);
    let speed = rng.gen_range(0.5..vmax);
    let gamma = 1.0 / (1.0 - speed * speed).sqrt();
    let u = random_direction(rng) * (speed * gamma);
    PrimitiveState::new(
        rng.gen_range(0.2..4.0),
        [u[0], u[1], u[2]],
        [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ],
        rng.gen_range(-0.5..0.5),
        eos,
    )
}

/// Admissible state with zero velocity.
pub fn rest_state(rng: &mut ChaCha8Rng) -> PrimitiveState {
    let eos = random_eos(rng);
    PrimitiveState::new(
        rng.gen_range(0.2..4.0),
        [0.0; 3],
        [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ],
        rng.gen_range(-0.5..0.5),
        eos,
    )
}

/// One side of a planar sheet with normal e1: zero normal velocity and
/// field, tangential field magnitude bounded away from zero.
pub fn sheet_side(rng: &mut ChaCha8Rng) -> SheetSide {
    let eos = random_eos(rng);
    let hmag = rng.gen_range(0.3..2.0);
    let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let st = PrimitiveState::new(
        rng.gen_range(0.2..4.0),
        [0.0, rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)],
        [0.0, hmag * ang.cos(), hmag * ang.sin()],
        rng.gen_range(-0.5..0.5),
        eos,
    );
    SheetSide::new(st).expect("construction satisfies the sheet constraints")
}

/// A sheet pair resampled until the tangential-field determinant clears
/// `det_eps`.
pub fn sheet_pair(rng: &mut ChaCha8Rng, det_eps: f64) -> (SheetSide, SheetSide) {
    loop {
        let plus = sheet_side(rng);
        let minus = sheet_side(rng);
        let det = plus.state.h[1] * minus.state.h[2] - plus.state.h[2] * minus.state.h[1];
        if det.abs() >= det_eps {
            return (plus, minus);
        }
    }
}

/// A sheet pair deep in the non-relativistic regime: |v| of order 1e-6 and
/// specific enthalpy within 1e-6 of 1, with order-one density and field.
pub fn nonrelativistic_sheet_pair(rng: &mut ChaCha8Rng, det_eps: f64) -> (SheetSide, SheetSide) {
    let gamma_ad = 5.0 / 3.0;
    let side = |rng: &mut ChaCha8Rng| {
        let eos = EosModel::new(gamma_ad).unwrap();
        let rho_target: f64 = rng.gen_range(0.55..2.0);
        let p: f64 = rng.gen_range(0.5e-7..1.9e-7);
        let s = p.ln() - gamma_ad * rho_target.ln();
        let hmag = rng.gen_range(0.3..2.0);
        let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let st = PrimitiveState::new(
            p,
            [0.0, rng.gen_range(-1e-6..1e-6), rng.gen_range(-1e-6..1e-6)],
            [0.0, hmag * ang.cos(), hmag * ang.sin()],
            s,
            eos,
        );
        SheetSide::new(st).expect("construction satisfies the sheet constraints")
    };
    loop {
        let plus = side(rng);
        let minus = side(rng);
        let det = plus.state.h[1] * minus.state.h[2] - plus.state.h[2] * minus.state.h[1];
        if det.abs() >= det_eps {
            return (plus, minus);
        }
    }
}

/// Unstructured perturbation vector with components in (-1, 1).
pub fn perturbation(rng: &mut ChaCha8Rng) -> Vector8 {
    let mut v = Vector8::zeros();
    for k in 0..8 {
        v[k] = rng.gen_range(-1.0..1.0);
    }
    v
}
