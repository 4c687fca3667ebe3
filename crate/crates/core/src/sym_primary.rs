//! Symmetric quasilinear form A0(U) d_t U + sum_j A_j(U) d_j U = 0 of ideal
//! RMHD in primitive variables, valid for smooth solutions with div H = 0.
//!
//! Two independent constructions are provided: the closed-form lab-frame
//! assembly (`build_a0`/`build_aj`/`build_quadruple`) and a boost of the much
//! simpler rest-frame matrices through the perturbation transform
//! (`build_via_boost`). They must agree, and tests hold them to that.

use nalgebra::{Cholesky, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::lorentz::{boost_kit, BoostKit};
use crate::state::PrimitiveState;
use crate::{Matrix7, Matrix8};

/// The four coefficient matrices (A0, A1, A2, A3) acting on the state
/// ordering (p, u1, u2, u3, H1, H2, H3, S).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixQuadruple {
    pub a0: Matrix8,
    pub a: [Matrix8; 3],
}

/// Rest-frame coefficient matrices on (p, u, H') with the entropy
/// row/column stripped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RestQuadruple {
    pub a0: Matrix7,
    pub a: [Matrix7; 3],
}

impl MatrixQuadruple {
    /// Directional coefficient matrix A(n) = sum_j n_j A_j.
    pub fn along(&self, n: &Vector3<f64>) -> Matrix8 {
        self.a[0] * n[0] + self.a[1] * n[1] + self.a[2] * n[2]
    }

    /// Largest absolute entry over all four matrices.
    pub fn max_abs(&self) -> f64 {
        self.a0
            .abs()
            .max()
            .max(self.a[0].abs().max())
            .max(self.a[1].abs().max())
            .max(self.a[2].abs().max())
    }

    /// Worst relative symmetry defect max_alpha ||A - A^T||_max / ||A||_max.
    pub fn symmetry_defect(&self) -> f64 {
        let defect = |m: &Matrix8| (m - m.transpose()).abs().max() / m.abs().max().max(1e-300);
        defect(&self.a0)
            .max(defect(&self.a[0]))
            .max(defect(&self.a[1]))
            .max(defect(&self.a[2]))
    }
}

fn outer(a: &Vector3<f64>, b: &Vector3<f64>) -> Matrix3<f64> {
    a * b.transpose()
}

/// a (x) b + b (x) a.
fn sym_outer(a: &Vector3<f64>, b: &Vector3<f64>) -> Matrix3<f64> {
    a * b.transpose() + b * a.transpose()
}

fn unit(j: usize) -> Vector3<f64> {
    let mut e = Vector3::zeros();
    e[j] = 1.0;
    e
}

fn set_block(m: &mut Matrix8, r: usize, c: usize, b: &Matrix3<f64>) {
    m.fixed_view_mut::<3, 3>(r, c).copy_from(b);
}

fn set_pair(m: &mut Matrix8, r: usize, c: usize, v: &Vector3<f64>) {
    for i in 0..3 {
        m[(r + i, c)] = v[i];
        m[(c, r + i)] = v[i];
    }
}

/// Temporal coefficient matrix A0(U); symmetric positive definite on the
/// hyperbolicity region.
pub fn build_a0(st: &PrimitiveState) -> Result<Matrix8> {
    let d = st.derive()?;
    let g = d.gamma;
    let v = d.v;
    let hf = st.h;
    let vh = v.dot(&hf);
    let hh = hf.norm_squared();
    let rhg = d.rho * d.h * g;

    let a_block = (rhg + hh / g) * Matrix3::identity()
        - (rhg + (hh + d.b2) / g) * outer(&v, &v)
        - outer(&hf, &hf) / g
        + (vh / g) * sym_outer(&v, &hf);
    let m_block = (Matrix3::identity() + outer(&st.u, &st.u)) / g;

    let mut a0 = Matrix8::zeros();
    a0[(0, 0)] = g / (d.rho * d.a2);
    set_pair(&mut a0, 1, 0, &v);
    set_block(&mut a0, 1, 1, &a_block);
    set_block(&mut a0, 4, 4, &m_block);
    a0[(7, 7)] = 1.0;
    Ok(a0)
}

/// Spatial coefficient matrix A_j(U) along `axis` (0, 1 or 2).
pub fn build_aj(st: &PrimitiveState, axis: usize) -> Result<Matrix8> {
    let d = st.derive()?;
    let g = d.gamma;
    let v = d.v;
    let hf = st.h;
    let e = unit(axis);
    let vh = v.dot(&hf);
    let hh = hf.norm_squared();
    let rhg = d.rho * d.h * g;
    let vj = v[axis];
    let hj = hf[axis];

    let a_block = vj
        * ((rhg + hh / g) * Matrix3::identity()
            - (rhg + (hh - d.b2) / g) * outer(&v, &v)
            - outer(&hf, &hf) / g)
        + (hj / g)
            * (sym_outer(&v, &hf) / (g * g)
                - 2.0 * vh * (Matrix3::identity() - outer(&v, &v)))
        + (vh / g) * sym_outer(&hf, &e)
        - (d.b2 / g) * sym_outer(&v, &e);
    let n_block = outer(&d.b, &e) / g - vj * outer(&d.b, &v) / g
        - (hj / (g * g)) * Matrix3::identity();
    let m_block = (Matrix3::identity() + outer(&st.u, &st.u)) / g;

    let mut aj = Matrix8::zeros();
    aj[(0, 0)] = st.u[axis] / (d.rho * d.a2);
    set_pair(&mut aj, 1, 0, &e);
    set_block(&mut aj, 1, 1, &a_block);
    set_block(&mut aj, 1, 4, &n_block.transpose());
    set_block(&mut aj, 4, 1, &n_block);
    set_block(&mut aj, 4, 4, &(vj * m_block));
    aj[(7, 7)] = vj;
    Ok(aj)
}

/// Velocity-independent-part split of A_j: the matrix G_j with
/// A_j = v_j A0 + G_j.
pub fn build_gj(st: &PrimitiveState, axis: usize) -> Result<Matrix8> {
    let d = st.derive()?;
    let g = d.gamma;
    let v = d.v;
    let hf = st.h;
    let e = unit(axis);
    let vh = v.dot(&hf);
    let vj = v[axis];
    let hj = hf[axis];

    let g_block = vj
        * (2.0 * (d.b2 / g) * outer(&v, &v) - (vh / g) * sym_outer(&v, &hf))
        + (hj / g)
            * (sym_outer(&v, &hf) / (g * g)
                - 2.0 * vh * (Matrix3::identity() - outer(&v, &v)))
        + (vh / g) * sym_outer(&hf, &e)
        - (d.b2 / g) * sym_outer(&v, &e);
    let n_block = outer(&d.b, &e) / g - vj * outer(&d.b, &v) / g
        - (hj / (g * g)) * Matrix3::identity();

    let mut gj = Matrix8::zeros();
    set_pair(&mut gj, 1, 0, &(e - vj * v));
    set_block(&mut gj, 1, 1, &g_block);
    set_block(&mut gj, 1, 4, &n_block.transpose());
    set_block(&mut gj, 4, 1, &n_block);
    Ok(gj)
}

/// All four matrices through the closed-form lab-frame assembly.
pub fn build_quadruple(st: &PrimitiveState) -> Result<MatrixQuadruple> {
    Ok(MatrixQuadruple {
        a0: build_a0(st)?,
        a: [build_aj(st, 0)?, build_aj(st, 1)?, build_aj(st, 2)?],
    })
}

/// Rest-frame coefficient matrices on (p, u, H'): block-diagonal temporal
/// matrix and sparse spatial matrices.
pub fn rest_quadruple(rho: f64, a2: f64, h_spec: f64, hp: &Vector3<f64>) -> RestQuadruple {
    let ap_block = (rho * h_spec + hp.norm_squared()) * Matrix3::identity()
        - hp * hp.transpose();

    let mut a0 = Matrix7::zeros();
    a0[(0, 0)] = 1.0 / (rho * a2);
    a0.fixed_view_mut::<3, 3>(1, 1).copy_from(&ap_block);
    a0.fixed_view_mut::<3, 3>(4, 4)
        .copy_from(&Matrix3::identity());

    let mut a = [Matrix7::zeros(); 3];
    for (j, aj) in a.iter_mut().enumerate() {
        let e = unit(j);
        let k_block = -hp[j] * Matrix3::identity() + hp * e.transpose();
        for i in 0..3 {
            aj[(0, 1 + i)] = e[i];
            aj[(1 + i, 0)] = e[i];
        }
        aj.fixed_view_mut::<3, 3>(1, 4).copy_from(&k_block.transpose());
        aj.fixed_view_mut::<3, 3>(4, 1).copy_from(&k_block);
    }
    RestQuadruple { a0, a }
}

/// Push a rest-frame quadruple to the lab frame: contract the rest-frame
/// derivatives with the inverse boost, conjugate by the perturbation
/// transform J, and pad the decoupled entropy row/column (diag 1 and v_j).
pub(crate) fn assemble_lab(rest: &RestQuadruple, kit: &BoostKit) -> MatrixQuadruple {
    let g = kit.gamma;
    let v = kit.v;
    let coef = g * g / (g + 1.0);
    let j = kit.j_matrix();
    let jt = j.transpose();

    let g_rest = rest.a[0] * v[0] + rest.a[1] * v[1] + rest.a[2] * v[2];
    let c0 = (rest.a0 + g_rest) * g;
    let lab0 = jt * c0 * j;

    let mut quad = MatrixQuadruple {
        a0: pad(&lab0, 1.0),
        a: [Matrix8::zeros(); 3],
    };
    for axis in 0..3 {
        let c = rest.a0 * (g * v[axis]) + rest.a[axis] + g_rest * (coef * v[axis]);
        quad.a[axis] = pad(&(jt * c * j), v[axis]);
    }
    quad
}

fn pad(m: &Matrix7, entropy: f64) -> Matrix8 {
    let mut out = Matrix8::zeros();
    out.fixed_view_mut::<7, 7>(0, 0).copy_from(m);
    out[(7, 7)] = entropy;
    out
}

/// All four matrices by boosting the rest-frame quadruple. Independent of
/// the closed-form route; the two must agree to rounding.
pub fn build_via_boost(st: &PrimitiveState) -> Result<MatrixQuadruple> {
    let d = st.derive()?;
    let kit = boost_kit(d.v, st.h)?;
    let rest = rest_quadruple(d.rho, d.a2, d.h, &kit.h_prime);
    Ok(assemble_lab(&rest, &kit))
}

/// Characteristic speeds along unit direction `n`: eigenvalues of the pencil
/// (A(n), A0), computed through the Cholesky congruence of A0.
pub fn wave_speeds(quad: &MatrixQuadruple, n: &Vector3<f64>) -> Result<[f64; 8]> {
    let chol = Cholesky::new(quad.a0).ok_or_else(|| {
        Error::InvalidInput("temporal coefficient matrix is not positive definite".into())
    })?;
    let an = quad.along(n);
    let y = chol.l().solve_lower_triangular(&an).ok_or_else(|| {
        Error::InvalidInput("singular Cholesky factor in wave-speed solve".into())
    })?;
    let z = chol
        .l()
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| {
            Error::InvalidInput("singular Cholesky factor in wave-speed solve".into())
        })?;
    let m = (z + z.transpose()) * 0.5;
    let mut speeds: [f64; 8] = nalgebra::SymmetricEigen::new(m).eigenvalues.into();
    speeds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(speeds)
}

/// Smallest eigenvalue of the temporal coefficient matrix.
pub fn min_eigenvalue(m: &Matrix8) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    nalgebra::SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &x| acc.min(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::EosModel;
    use approx::assert_relative_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn eos2() -> EosModel {
        EosModel::new(2.0).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, umax: f64, hmax: f64) -> PrimitiveState {
        let mut field = [0.0; 3];
        if hmax > 0.0 {
            for f in &mut field {
                *f = rng.gen_range(-hmax..hmax);
            }
        }
        PrimitiveState::new(
            rng.gen_range(0.2..4.0),
            [
                rng.gen_range(-umax..umax),
                rng.gen_range(-umax..umax),
                rng.gen_range(-umax..umax),
            ],
            field,
            rng.gen_range(-0.5..0.5),
            EosModel::new(rng.gen_range(1.3..2.0)).unwrap(),
        )
    }

    fn rel_diff(a: &Matrix8, b: &Matrix8) -> f64 {
        (a - b).abs().max() / a.abs().max().max(b.abs().max()).max(1e-300)
    }

    #[test]
    fn rest_state_has_rest_frame_structure() {
        let st = PrimitiveState::new(1.0, [0.0; 3], [0.4, -0.3, 1.1], 0.2, eos2());
        let d = st.derive().unwrap();
        let a0 = build_a0(&st).unwrap();
        let rest = rest_quadruple(d.rho, d.a2, d.h, &st.h);

        assert_relative_eq!(a0[(0, 0)], 1.0 / (d.rho * d.a2), max_relative = 1e-14);
        for r in 0..7 {
            for c in 0..7 {
                assert_relative_eq!(a0[(r, c)], rest.a0[(r, c)], max_relative = 1e-13);
            }
        }
        assert_eq!(a0[(7, 7)], 1.0);

        for axis in 0..3 {
            let aj = build_aj(&st, axis).unwrap();
            for r in 0..7 {
                for c in 0..7 {
                    assert!(
                        (aj[(r, c)] - rest.a[axis][(r, c)]).abs() <= 1e-13 * (1.0 + st.h.norm()),
                        "axis {axis} entry ({r},{c})"
                    );
                }
            }
            assert_eq!(aj[(7, 7)], 0.0);
        }
    }

    #[test]
    fn boost_route_at_zero_velocity_is_exactly_rest() {
        let st = PrimitiveState::new(0.7, [0.0; 3], [1.0, 0.5, -0.2], -0.1, eos2());
        let d = st.derive().unwrap();
        let rest = rest_quadruple(d.rho, d.a2, d.h, &st.h);
        let quad = build_via_boost(&st).unwrap();
        for r in 0..7 {
            for c in 0..7 {
                assert_eq!(quad.a0[(r, c)], rest.a0[(r, c)]);
                for axis in 0..3 {
                    assert_eq!(quad.a[axis][(r, c)], rest.a[axis][(r, c)]);
                }
            }
        }
    }

    #[test]
    fn diagonal_markers() {
        let st = PrimitiveState::new(0.9, [0.4, -0.8, 0.3], [0.5, 1.0, -0.7], 0.1, eos2());
        let d = st.derive().unwrap();
        let a0 = build_a0(&st).unwrap();
        assert_relative_eq!(a0[(0, 0)], d.gamma / (d.rho * d.a2), max_relative = 1e-14);
        assert_eq!(a0[(7, 7)], 1.0);
        for axis in 0..3 {
            let aj = build_aj(&st, axis).unwrap();
            assert_relative_eq!(
                aj[(0, 0)],
                st.u[axis] / (d.rho * d.a2),
                max_relative = 1e-14
            );
            assert_relative_eq!(aj[(7, 7)], d.v[axis], max_relative = 1e-15);
        }
    }

    #[test]
    fn dual_construction_agrees_on_stiff_state() {
        // |v| = 0.9 along x with a strong transverse field.
        let gamma = 1.0 / (1.0f64 - 0.81).sqrt();
        let st = PrimitiveState::new(
            1.0,
            [0.9 * gamma, 0.0, 0.0],
            [0.0, 2.0, 0.0],
            0.0,
            eos2(),
        );
        let direct = build_quadruple(&st).unwrap();
        let boosted = build_via_boost(&st).unwrap();
        assert!(rel_diff(&direct.a0, &boosted.a0) <= 1e-11);
        for axis in 0..3 {
            assert!(rel_diff(&direct.a[axis], &boosted.a[axis]) <= 1e-11, "axis {axis}");
        }
    }

    #[test]
    fn dual_construction_agrees_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..60 {
            let st = random_state(&mut rng, 2.0, 2.0);
            let direct = build_quadruple(&st).unwrap();
            let boosted = build_via_boost(&st).unwrap();
            assert!(rel_diff(&direct.a0, &boosted.a0) <= 1e-11);
            for axis in 0..3 {
                assert!(rel_diff(&direct.a[axis], &boosted.a[axis]) <= 1e-11);
            }
        }
    }

    #[test]
    fn assembly_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..60 {
            let st = random_state(&mut rng, 2.0, 2.0);
            assert!(build_quadruple(&st).unwrap().symmetry_defect() <= 1e-12);
            assert!(build_via_boost(&st).unwrap().symmetry_defect() <= 1e-12);
        }
    }

    #[test]
    fn temporal_matrix_is_positive_definite() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..60 {
            let st = random_state(&mut rng, 2.5, 2.5);
            let a0 = build_a0(&st).unwrap();
            assert!(min_eigenvalue(&a0) > 0.0);
        }
    }

    #[test]
    fn split_reconstructs_spatial_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let st = random_state(&mut rng, 2.0, 2.0);
            let d = st.derive().unwrap();
            let a0 = build_a0(&st).unwrap();
            for axis in 0..3 {
                let aj = build_aj(&st, axis).unwrap();
                let gj = build_gj(&st, axis).unwrap();
                let recon = a0 * d.v[axis] + gj;
                assert!(rel_diff(&aj, &recon) <= 1e-12, "axis {axis}");
            }
        }
    }

    #[test]
    fn unmagnetized_reduces_to_relativistic_euler() {
        // Independent assembly of the Euler coefficient matrices on (p, u, S).
        fn euler_b0(st: &PrimitiveState) -> nalgebra::SMatrix<f64, 5, 5> {
            let d = st.derive().unwrap();
            let mut b = nalgebra::SMatrix::<f64, 5, 5>::zeros();
            b[(0, 0)] = d.gamma / (d.rho * d.a2);
            let blk = d.rho * d.h * d.gamma
                * (Matrix3::identity() - d.v * d.v.transpose());
            for i in 0..3 {
                b[(0, 1 + i)] = d.v[i];
                b[(1 + i, 0)] = d.v[i];
                for k in 0..3 {
                    b[(1 + i, 1 + k)] = blk[(i, k)];
                }
            }
            b[(4, 4)] = 1.0;
            b
        }
        fn euler_bj(st: &PrimitiveState, axis: usize) -> nalgebra::SMatrix<f64, 5, 5> {
            let d = st.derive().unwrap();
            let mut b = nalgebra::SMatrix::<f64, 5, 5>::zeros();
            b[(0, 0)] = st.u[axis] / (d.rho * d.a2);
            let blk = d.rho * d.h * st.u[axis]
                * (Matrix3::identity() - d.v * d.v.transpose());
            for i in 0..3 {
                b[(0, 1 + i)] = if i == axis { 1.0 } else { 0.0 };
                b[(1 + i, 0)] = b[(0, 1 + i)];
                for k in 0..3 {
                    b[(1 + i, 1 + k)] = blk[(i, k)];
                }
            }
            b[(4, 4)] = d.v[axis];
            b
        }

        let idx = [0usize, 1, 2, 3, 7];
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..40 {
            let mut st = random_state(&mut rng, 2.0, 0.0);
            st.h = Vector3::zeros();
            let quad = build_quadruple(&st).unwrap();
            let b0 = euler_b0(&st);
            for (r, &ri) in idx.iter().enumerate() {
                for (c, &ci) in idx.iter().enumerate() {
                    assert!(
                        (quad.a0[(ri, ci)] - b0[(r, c)]).abs()
                            <= 1e-13 * b0.abs().max(),
                        "A0 euler minor ({r},{c})"
                    );
                }
            }
            for axis in 0..3 {
                let bj = euler_bj(&st, axis);
                for (r, &ri) in idx.iter().enumerate() {
                    for (c, &ci) in idx.iter().enumerate() {
                        assert!(
                            (quad.a[axis][(ri, ci)] - bj[(r, c)]).abs()
                                <= 1e-13 * b0.abs().max().max(bj.abs().max()),
                            "A{axis} euler minor ({r},{c})"
                        );
                    }
                }
                // Field rows/columns decouple entirely when H = 0.
                for r in 4..7 {
                    for c in 0..4 {
                        assert_eq!(quad.a[axis][(r, c)], 0.0);
                        assert_eq!(quad.a[axis][(c, r)], 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn wave_speeds_are_subluminal_and_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..40 {
            let umax = if trial % 4 == 0 { 7.0 } else { 2.0 };
            let st = random_state(&mut rng, umax, 2.0);
            let quad = build_quadruple(&st).unwrap();
            for n in [
                Vector3::new(1.0, 0.0, 0.0),
                Vector3::new(0.0, 1.0, 0.0),
                Vector3::new(0.0, 0.0, 1.0),
                Vector3::new(0.6, -0.48, 0.64),
            ] {
                let speeds = wave_speeds(&quad, &n).unwrap();
                for s in speeds {
                    assert!(s.abs() < 1.0 + 1e-10, "speed {s} for |n| = {}", n.norm());
                }
                // Independent reality check on the pencil spectrum.
                let pencil = quad.a0.try_inverse().unwrap() * quad.along(&n);
                let eigs = pencil.complex_eigenvalues();
                for e in eigs.iter() {
                    assert!(e.im.abs() <= 1e-10 * (1.0 + e.re.abs()));
                }
            }
        }
    }

    #[test]
    fn generalized_eigenpairs_satisfy_pencil_equation() {
        let st = PrimitiveState::new(1.2, [0.8, -0.3, 0.5], [0.9, 0.1, -0.6], 0.2, eos2());
        let quad = build_quadruple(&st).unwrap();
        let n = Vector3::new(0.0, 0.6, 0.8);
        let an = quad.along(&n);
        let chol = Cholesky::new(quad.a0).unwrap();
        let y = chol.l().solve_lower_triangular(&an).unwrap();
        let z = chol.l().solve_lower_triangular(&y.transpose()).unwrap();
        let eig = nalgebra::SymmetricEigen::new((z + z.transpose()) * 0.5);
        let scale = an.abs().max();
        for k in 0..8 {
            let s = eig.eigenvalues[k];
            let w = chol
                .l()
                .transpose()
                .solve_upper_triangular(&eig.eigenvectors.column(k).into_owned())
                .unwrap();
            let resid = (an * w - quad.a0 * w * s).norm();
            assert!(resid <= 1e-9 * scale, "eigenpair {k} residual {resid}");
        }
    }
}
