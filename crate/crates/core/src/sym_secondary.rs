//! One-parameter family of alternative symmetrizations of the same system.
//!
//! Adding a multiple lambda of the div H = 0 constraint structure to the
//! symmetrizer yields new symmetric coefficient quadruples whose temporal
//! matrix stays positive definite exactly while
//! lambda^2 < c_s^2 / (rho a^2 + B^2). The family is assembled in the rest
//! frame and pushed to the lab frame through the same boost assembler as the
//! plain quadruple, so lambda = 0 reproduces it bitwise.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::lorentz::boost_kit;
use crate::state::PrimitiveState;
use crate::sym_primary::{assemble_lab, rest_quadruple, MatrixQuadruple, RestQuadruple};
use crate::{Matrix7, Vector7};

/// A lab-frame family member together with the parameter it was built at
/// and the positivity window bound for the underlying state.
#[derive(Clone, Copy, Debug)]
pub struct SecondaryKit {
    pub lambda: f64,
    pub quadruple: MatrixQuadruple,
    pub window_bound: f64,
}

fn unit(j: usize) -> Vector3<f64> {
    let mut e = Vector3::zeros();
    e[j] = 1.0;
    e
}

/// (rho h + |H'|^2) I - H' (x) H', the rest-frame velocity-block metric.
fn ap_block(rho: f64, h_spec: f64, hp: &Vector3<f64>) -> Matrix3<f64> {
    (rho * h_spec + hp.norm_squared()) * Matrix3::identity() - hp * hp.transpose()
}

/// Constraint-coupling matrix added to the temporal rest-frame matrix.
fn l0(rho: f64, a2: f64, h_spec: f64, hp: &Vector3<f64>) -> Matrix7 {
    let ap = ap_block(rho, h_spec, hp);
    let mut m = Matrix7::zeros();
    for i in 0..3 {
        m[(0, 1 + i)] = rho * h_spec * hp[i] / (rho * a2);
        m[(1 + i, 0)] = m[(0, 1 + i)];
    }
    m.fixed_view_mut::<3, 3>(1, 4).copy_from(&(-ap));
    m.fixed_view_mut::<3, 3>(4, 1).copy_from(&(-ap));
    m
}

/// Constraint-coupling matrix added to the spatial rest-frame matrix along
/// `axis`.
fn lj(rho: f64, a2: f64, h_spec: f64, hp: &Vector3<f64>, axis: usize) -> Matrix7 {
    let e = unit(axis);
    let ap = ap_block(rho, h_spec, hp);
    let mj = hp[axis] * Matrix3::identity() - (hp * e.transpose() + e * hp.transpose());
    let mut m = Matrix7::zeros();
    m[(0, 0)] = hp[axis] / (rho * a2);
    for i in 0..3 {
        m[(0, 4 + i)] = -e[i];
        m[(4 + i, 0)] = -e[i];
    }
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(&(ap * hp[axis]));
    m.fixed_view_mut::<3, 3>(4, 4).copy_from(&mj);
    m
}

fn rest_family(
    rho: f64,
    a2: f64,
    h_spec: f64,
    hp: &Vector3<f64>,
    lambda: f64,
) -> RestQuadruple {
    let mut quad = rest_quadruple(rho, a2, h_spec, hp);
    quad.a0 += l0(rho, a2, h_spec, hp) * lambda;
    for (axis, aj) in quad.a.iter_mut().enumerate() {
        *aj += lj(rho, a2, h_spec, hp, axis) * lambda;
    }
    quad
}

fn require_rest(st: &PrimitiveState) -> Result<()> {
    if st.u.norm() > 1e-12 {
        return Err(Error::InvalidInput(format!(
            "rest-frame constructor needs u = 0, got |u| = {:e}",
            st.u.norm()
        )));
    }
    Ok(())
}

/// Rest-frame family member at parameter `lambda` for a state with u = 0.
pub fn build_rest_secondary(st: &PrimitiveState, lambda: f64) -> Result<RestQuadruple> {
    require_rest(st)?;
    if !lambda.is_finite() {
        return Err(Error::InvalidInput("lambda must be finite".into()));
    }
    let d = st.derive()?;
    Ok(rest_family(d.rho, d.a2, d.h, &st.h, lambda))
}

/// The factor D' relating the family temporal matrix to the plain one
/// (D' applied from the left), and the constraint multiplier vector R'.
/// D' has real positive spectrum exactly inside the window.
pub fn build_dprime_rprime(st: &PrimitiveState, lambda: f64) -> Result<(Matrix7, Vector7)> {
    require_rest(st)?;
    let d = st.derive()?;
    let hp = st.h;
    let ap = ap_block(d.rho, d.h, &hp);

    let mut dp = Matrix7::identity();
    for i in 0..3 {
        dp[(0, 1 + i)] = lambda * hp[i] / (d.rho * d.a2);
        dp[(1 + i, 0)] = lambda * d.rho * d.h * hp[i];
    }
    dp.fixed_view_mut::<3, 3>(1, 4).copy_from(&(-lambda * ap));
    dp.fixed_view_mut::<3, 3>(4, 1)
        .copy_from(&(-lambda * Matrix3::identity()));

    let mut rp = Vector7::zeros();
    rp[0] = -lambda;
    for i in 0..3 {
        rp[4 + i] = -lambda * hp[i];
    }
    Ok((dp, rp))
}

/// Positivity window bound m(U) = c_s / sqrt(rho a^2 + B^2). The temporal
/// family matrix is positive definite exactly for |lambda| < m. Built from
/// Lorentz scalars, so it agrees between frames.
pub fn window_bound(st: &PrimitiveState) -> Result<f64> {
    let d = st.derive()?;
    Ok(d.cs2.sqrt() / (d.rho * d.a2 + d.b2).sqrt())
}

/// Lab-frame family member at parameter `lambda`. No window enforcement:
/// callers probing the boundary need both sides.
pub fn build_secondary(st: &PrimitiveState, lambda: f64) -> Result<SecondaryKit> {
    if !lambda.is_finite() {
        return Err(Error::InvalidInput("lambda must be finite".into()));
    }
    let d = st.derive()?;
    let kit = boost_kit(d.v, st.h)?;
    let rest = rest_family(d.rho, d.a2, d.h, &kit.h_prime, lambda);
    Ok(SecondaryKit {
        lambda,
        quadruple: assemble_lab(&rest, &kit),
        window_bound: d.cs2.sqrt() / (d.rho * d.a2 + d.b2).sqrt(),
    })
}
