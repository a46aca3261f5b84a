use bvlab_kernel::{Complex, PlanarGradient, Scalar};

use crate::{Orientation, RadialError, RadialProfile};

/// `(f_z, f_zbar)` of the radial stretching at `z = r` on the positive axis.
pub fn radial_derivatives<T: Scalar>(
    prof: &RadialProfile<T>,
    r: T,
) -> Result<PlanarGradient<T>, RadialError> {
    radial_derivatives_at(prof, Complex::new(r, T::zero()))
}

/// `(f_z, f_zbar)` at an arbitrary point `0 < |z| ≤ R`.
pub fn radial_derivatives_at<T: Scalar>(
    prof: &RadialProfile<T>,
    z: Complex<T>,
) -> Result<PlanarGradient<T>, RadialError> {
    let r = z.norm();
    if !(r > T::zero() && r <= prof.radius * (T::one() + T::epsilon())) {
        return Err(RadialError::RadiusOutOfRange { r: r.to_f64_lossy(), radius: prof.radius.to_f64_lossy() });
    }
    let (v, d) = prof.rho.eval(r);
    let half = T::lit(0.5);
    let sum = (v / r + d) * half;
    let diff = (d - v / r) * half;
    // z/z̄ = e^{2iθ}
    let phase = (z / z.conj()).unscale(T::one());
    Ok(match prof.orientation {
        Orientation::Plus => PlanarGradient::new(Complex::new(sum, T::zero()), phase.scale(diff)),
        Orientation::Minus => {
            PlanarGradient::new(phase.conj().scale(diff), Complex::new(sum, T::zero()))
        }
    })
}

/// Moduli `(|f_z|, |f_zbar|)` at radius `r`, without phases.
pub(crate) fn radial_moduli<T: Scalar>(prof: &RadialProfile<T>, r: T) -> (T, T) {
    let (v, d) = prof.rho.eval(r);
    let half = T::lit(0.5);
    let (sum, diff) = ((v / r + d).abs() * half, (d - v / r).abs() * half);
    match prof.orientation {
        Orientation::Plus => (sum, diff),
        Orientation::Minus => (diff, sum),
    }
}
