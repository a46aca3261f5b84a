use bvlab_kernel::Scalar;
use bvlab_radial::RhoFamily;

use crate::{ElError, IntegrandUV};

/// `(E_uu − 2E_uv + E_vv, E_uu − E_vv + 2E_v / v)`.
pub fn pde_pair_residual<T: Scalar>(e: &impl IntegrandUV<T>, u: T, v: T) -> (T, T) {
    debug_assert!(u > T::zero() && v > T::zero());
    let d = e.derivs(u, v);
    let two = T::lit(2.0);
    (d.euu - two * d.euv + d.evv, d.euu - d.evv + two * d.ev / v)
}

/// The second equation in the form `E_uu − E_vv = −2E_v / v`, as
/// `(E_uu − E_vv) − (−2E_v / v)`.
pub fn second_equation_as_written<T: Scalar>(e: &impl IntegrandUV<T>, u: T, v: T) -> T {
    let d = e.derivs(u, v);
    (d.euu - d.evv) - (-T::lit(2.0) * d.ev / v)
}

/// Both residuals divided by the sum of the magnitudes of their terms.
pub fn pde_pair_scaled<T: Scalar>(e: &impl IntegrandUV<T>, u: T, v: T) -> (T, T) {
    let d = e.derivs(u, v);
    let two = T::lit(2.0);
    let r1 = d.euu - two * d.euv + d.evv;
    let r2 = d.euu - d.evv + two * d.ev / v;
    let s1 = d.euu.abs() + two * d.euv.abs() + d.evv.abs();
    let s2 = d.euu.abs() + d.evv.abs() + two * (d.ev / v).abs();
    (ratio(r1, s1), ratio(r2, s2))
}

fn ratio<T: Scalar>(r: T, s: T) -> T {
    if s > T::zero() {
        r.abs() / s
    } else {
        r.abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElResidual<T> {
    pub r: T,
    pub rho: T,
    pub drho: T,
    pub ddrho: T,
    pub residual: T,
    /// Sum of the magnitudes of the terms in the residual.
    pub scale: T,
}

impl<T: Scalar> ElResidual<T> {
    pub fn scaled(&self) -> T {
        ratio(self.residual, self.scale)
    }
}

fn radial_state<T: Scalar>(rho: &RhoFamily<T>, r: T) -> Result<(T, T, T, T, T), ElError> {
    if !(r > T::zero()) || !rho.is_c2() {
        return Err(ElError::NotSmooth { r: r.to_f64_lossy() });
    }
    let (f, df, ddf) = rho.eval2(r);
    if !(f > r * df) {
        return Err(ElError::OutsideAssumption {
            r: r.to_f64_lossy(),
            rho: f.to_f64_lossy(),
            r_drho: (r * df).to_f64_lossy(),
        });
    }
    let half = T::lit(0.5);
    Ok((f, df, ddf, half * (f / r + df), half * (f / r - df)))
}

/// `(E_uu − 2E_uv + E_vv) r ρ'' − 2(E_uu − E_vv + 2E_v/v) v` along the
/// radial stretching `ρ(|z|) z/|z|`, with `u = (ρ/r + ρ')/2` and `v = (ρ/r − ρ')/2`.
pub fn radial_el_residual<T: Scalar>(
    e: &impl IntegrandUV<T>,
    rho: &RhoFamily<T>,
    r: T,
) -> Result<ElResidual<T>, ElError> {
    let (f, df, ddf, u, v) = radial_state(rho, r)?;
    let d = e.derivs(u, v);
    let two = T::lit(2.0);
    let lhs = (d.euu - two * d.euv + d.evv) * r * ddf;
    let rhs = two * (d.euu - d.evv + two * d.ev / v) * v;
    let scale = (r * ddf).abs() * (d.euu.abs() + two * d.euv.abs() + d.evv.abs())
        + two * v * (d.euu.abs() + d.evv.abs())
        + T::lit(4.0) * d.ev.abs();
    Ok(ElResidual { r, rho: f, drho: df, ddrho: ddf, residual: lhs - rhs, scale })
}

/// The same equation before collecting terms:
/// `(ρ'' + ρ'/r − ρ/r²)E_uu − 2ρ''E_uv + (ρ'' − ρ'/r + ρ/r²)E_vv − (4/r)E_v`.
///
/// Equals the collected residual divided by `r`.
pub fn radial_el_residual_expanded<T: Scalar>(
    e: &impl IntegrandUV<T>,
    rho: &RhoFamily<T>,
    r: T,
) -> Result<T, ElError> {
    let (f, df, ddf, u, v) = radial_state(rho, r)?;
    let d = e.derivs(u, v);
    let k = df / r - f / (r * r);
    Ok((ddf + k) * d.euu - T::lit(2.0) * ddf * d.euv + (ddf - k) * d.evv - T::lit(4.0) / r * d.ev)
}
