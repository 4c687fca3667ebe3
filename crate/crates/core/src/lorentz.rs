//! Lorentz boosts into the fluid rest frame and the induced linear map on
//! primitive perturbations.
//!
//! The 0/0-prone velocity coefficients are evaluated through the exact
//! rewrites (Gamma-1)/v^2 = Gamma^2/(Gamma+1) and (Gamma-1)/(Gamma v^2) =
//! Gamma/(Gamma+1), valid because v^2 = 1 - 1/Gamma^2; both are finite and
//! cancellation-free all the way to v = 0.

use nalgebra::{Matrix3, Matrix4, Vector3};

use crate::error::{Error, Result};
use crate::Matrix7;

/// Boost matrices and perturbation-transform blocks for a given 3-velocity
/// and lab-frame magnetic field.
#[derive(Clone, Copy, Debug)]
pub struct BoostKit {
    /// Lorentz factor of the boost.
    pub gamma: f64,
    /// Boost 3-velocity.
    pub v: Vector3<f64>,
    /// Boost into the frame comoving with v (4x4, acting on (t, x) 4-vectors).
    pub l: Matrix4<f64>,
    /// Inverse boost, same form with v negated.
    pub l_inv: Matrix4<f64>,
    /// Velocity-perturbation block, delta u' = J1 delta u.
    pub j1: Matrix3<f64>,
    /// Field-perturbation block acting on delta H.
    pub j2: Matrix3<f64>,
    /// Field-perturbation block acting on delta u.
    pub j3: Matrix3<f64>,
    /// Rest-frame magnetic field H' = H/Gamma + (Gamma/(Gamma+1)) (v,H) v.
    pub h_prime: Vector3<f64>,
}

/// (Gamma - 1)/v^2 without cancellation.
fn gm1_over_v2(gamma: f64) -> f64 {
    gamma * gamma / (gamma + 1.0)
}

/// (Gamma - 1)/(Gamma v^2) without cancellation.
fn gm1_over_gv2(gamma: f64) -> f64 {
    gamma / (gamma + 1.0)
}

fn boost_matrix(gamma: f64, v: &Vector3<f64>) -> Matrix4<f64> {
    let mut l = Matrix4::zeros();
    l[(0, 0)] = gamma;
    let spatial = Matrix3::identity() + gm1_over_v2(gamma) * v * v.transpose();
    for i in 0..3 {
        l[(0, i + 1)] = -gamma * v[i];
        l[(i + 1, 0)] = -gamma * v[i];
        for k in 0..3 {
            l[(i + 1, k + 1)] = spatial[(i, k)];
        }
    }
    l
}

/// Build the boost and perturbation blocks for 3-velocity `v` and lab field `h`.
pub fn boost_kit(v: Vector3<f64>, h: Vector3<f64>) -> Result<BoostKit> {
    let v2 = v.norm_squared();
    if !(v2 < 1.0) {
        return Err(Error::SuperluminalVelocity { speed: v2.sqrt() });
    }
    let gamma = 1.0 / (1.0 - v2).sqrt();
    let vh = v.dot(&h);
    let id = Matrix3::identity();
    let vv = v * v.transpose();
    let j1 = id - gm1_over_gv2(gamma) * vv;
    let j2 = (id + gm1_over_v2(gamma) * vv) / gamma;
    let j3 = -(h * v.transpose()) / (gamma * gamma) + vh * (id - vv);
    let h_prime = h / gamma + gm1_over_gv2(gamma) * vh * v;
    Ok(BoostKit {
        gamma,
        v,
        l: boost_matrix(gamma, &v),
        l_inv: boost_matrix(gamma, &(-v)),
        j1,
        j2,
        j3,
        h_prime,
    })
}

impl BoostKit {
    /// The 7x7 perturbation transform on (p, u, H) blocks:
    /// delta p' = delta p, delta u' = J1 delta u, delta H' = J3 delta u + J2 delta H.
    pub fn j_matrix(&self) -> Matrix7 {
        let mut j = Matrix7::zeros();
        j[(0, 0)] = 1.0;
        for r in 0..3 {
            for c in 0..3 {
                j[(1 + r, 1 + c)] = self.j1[(r, c)];
                j[(4 + r, 1 + c)] = self.j3[(r, c)];
                j[(4 + r, 4 + c)] = self.j2[(r, c)];
            }
        }
        j
    }

    /// Apply the boost to a 4-vector given as (time, space) parts.
    pub fn boost(&self, t: f64, x: &Vector3<f64>) -> (f64, Vector3<f64>) {
        let four = nalgebra::Vector4::new(t, x[0], x[1], x[2]);
        let out = self.l * four;
        (out[0], Vector3::new(out[1], out[2], out[3]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PrimitiveState;
    use crate::eos::EosModel;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rand_v3(rng: &mut ChaCha8Rng, lim: f64) -> Vector3<f64> {
        Vector3::new(
            rng.gen_range(-lim..lim),
            rng.gen_range(-lim..lim),
            rng.gen_range(-lim..lim),
        )
    }

    #[test]
    fn zero_velocity_is_identity() {
        let kit = boost_kit(Vector3::zeros(), Vector3::new(0.3, -0.7, 1.1)).unwrap();
        assert_eq!(kit.gamma, 1.0);
        assert_eq!(kit.l, Matrix4::identity());
        assert_eq!(kit.j_matrix(), Matrix7::identity());
        assert_eq!(kit.h_prime, Vector3::new(0.3, -0.7, 1.1));
    }

    #[test]
    fn rest_frame_field_reference_values() {
        let v = Vector3::new(0.6, 0.0, 0.0);
        let kit = boost_kit(v, Vector3::new(0.0, 1.0, 0.0)).unwrap();
        assert_relative_eq!(kit.gamma, 1.25, max_relative = 1e-15);
        assert_relative_eq!(kit.h_prime[1], 0.8, max_relative = 1e-14);
        assert_eq!(kit.h_prime[0], 0.0);

        // A field parallel to the motion is unchanged.
        let kit = boost_kit(v, Vector3::new(1.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(kit.h_prime[0], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn boost_times_inverse_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut v = rand_v3(&mut rng, 1.0);
            if v.norm() >= 0.95 {
                v *= 0.9 / v.norm();
            }
            let kit = boost_kit(v, rand_v3(&mut rng, 2.0)).unwrap();
            let prod = kit.l * kit.l_inv;
            let defect = (prod - Matrix4::identity()).abs().max();
            assert!(defect <= 1e-13 * kit.gamma * kit.gamma, "defect {defect}");
        }
    }

    #[test]
    fn velocity_projection_of_field_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let mut v = rand_v3(&mut rng, 1.0);
            if v.norm() >= 0.98 {
                v *= 0.9 / v.norm();
            }
            let h = rand_v3(&mut rng, 3.0);
            let kit = boost_kit(v, h).unwrap();
            let lhs = v.dot(&kit.h_prime);
            let rhs = v.dot(&h);
            assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn magnetic_four_vector_boosts_to_rest_field() {
        // L applied to (b^0, b) must land on (0, H').
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let eos = EosModel::new(2.0).unwrap();
        for _ in 0..100 {
            let u = rand_v3(&mut rng, 2.5);
            let h = rand_v3(&mut rng, 2.5);
            let st = PrimitiveState::new(1.0, u.into(), h.into(), 0.0, eos);
            let d = st.derive().unwrap();
            let kit = boost_kit(d.v, st.h).unwrap();
            let (t, x) = kit.boost(d.b0, &d.b);
            let scale = 1.0 + h.norm() * kit.gamma;
            assert!(t.abs() <= 1e-13 * scale, "time component {t}");
            assert!((x - kit.h_prime).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn velocity_perturbation_boosts_through_j1() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let mut v = rand_v3(&mut rng, 1.0);
            if v.norm() >= 0.97 {
                v *= 0.9 / v.norm();
            }
            let kit = boost_kit(v, Vector3::zeros()).unwrap();
            let du = rand_v3(&mut rng, 1.0);
            let (t, x) = kit.boost(v.dot(&du), &du);
            assert!(t.abs() <= 1e-13 * kit.gamma * (1.0 + du.norm()));
            assert!((x - kit.j1 * du).norm() <= 1e-13 * kit.gamma * (1.0 + du.norm()));
        }
    }

    #[test]
    fn field_perturbation_boosts_through_j2_j3() {
        // Linearize b(u, H) around the state and push the 4-vector through L:
        // the result must be ((H', J1 du), J3 du + J2 dH).
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let u = rand_v3(&mut rng, 2.0);
            let h = rand_v3(&mut rng, 2.0);
            let du = rand_v3(&mut rng, 1.0);
            let dh = rand_v3(&mut rng, 1.0);
            let gamma = (1.0 + u.norm_squared()).sqrt();
            let v = u / gamma;
            let kit = boost_kit(v, h).unwrap();

            let dgamma = v.dot(&du);
            let dv = du / gamma - v * dgamma / gamma;
            let db0 = du.dot(&h) + u.dot(&dh);
            let db = dh / gamma - h * dgamma / (gamma * gamma) + db0 * v + u.dot(&h) * dv;

            let (t, x) = kit.boost(db0, &db);
            let expect = kit.j3 * du + kit.j2 * dh;
            let scale = (1.0 + h.norm()) * (1.0 + du.norm() + dh.norm()) * gamma;
            assert!((t - h.dot(&du) / gamma).abs() <= 1e-13 * scale);
            assert!((t - kit.h_prime.dot(&(kit.j1 * du))).abs() <= 1e-12 * scale);
            assert!((x - expect).norm() <= 1e-12 * scale, "defect {}", (x - expect).norm());
        }
    }

    #[test]
    fn coefficients_match_taylor_polynomials_near_zero() {
        let v2: f64 = 1e-12; // |v| = 1e-6
        let gamma = 1.0 / (1.0 - v2).sqrt();
        let taylor_a = 0.5 + 3.0 * v2 / 8.0 + 5.0 * v2 * v2 / 16.0;
        let taylor_b = 0.5 + v2 / 8.0 + v2 * v2 / 16.0;
        assert!((gm1_over_v2(gamma) - taylor_a).abs() <= 1e-10);
        assert!((gm1_over_gv2(gamma) - taylor_b).abs() <= 1e-10);
    }

    #[test]
    fn j_determinant_bounded_away_from_zero() {
        for &speed in &[0.0f64, 0.5, 0.9, 0.99, 0.999] {
            let v = Vector3::new(speed, 0.0, 0.0);
            let kit = boost_kit(v, Vector3::new(0.4, 1.0, -0.2)).unwrap();
            let det = kit.j_matrix().determinant();
            let expected = 1.0 / kit.gamma.powi(3);
            assert_relative_eq!(det, expected, max_relative = 1e-10);
            assert!(det.abs() > 1e-6);
        }
    }

    #[test]
    fn congruence_preserves_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let v = Vector3::new(0.3, -0.5, 0.6);
        let kit = boost_kit(v, Vector3::new(1.0, 0.2, -0.4)).unwrap();
        let j = kit.j_matrix();
        for _ in 0..20 {
            let mut m = Matrix7::zeros();
            for r in 0..7 {
                for c in 0..=r {
                    let x = rng.gen_range(-1.0..1.0);
                    m[(r, c)] = x;
                    m[(c, r)] = x;
                }
            }
            let out = j.transpose() * m * j;
            let defect = (out - out.transpose()).abs().max();
            assert!(defect <= 1e-13 * out.abs().max().max(1.0));
        }
    }

    #[test]
    fn superluminal_rejected() {
        for &speed in &[1.0, 1.2] {
            let v = Vector3::new(speed, 0.0, 0.0);
            assert!(matches!(
                boost_kit(v, Vector3::zeros()),
                Err(Error::SuperluminalVelocity { .. })
            ));
        }
    }
}
