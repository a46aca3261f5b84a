use bvlab_kernel::Scalar;
use bvlab_radial::{quad, Orientation};
use num_complex::Complex;

use crate::{BeurlingError, GridField};

fn logistic<T: Scalar>(x: T) -> T {
    if x >= T::zero() {
        (T::one() + (-x).exp()).recip()
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

fn softplus<T: Scalar>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Radial stretching whose logarithmic slope `t ↦ r ρ'/ρ` (with `t = ln r`)
/// is `1` near the origin, `alpha` on `(r_cap, r_outer)` and `−1` beyond,
/// with logistic transitions of width `width` in `t`.
///
/// The map is `ρ(r) z/r` for [`Orientation::Plus`] and its conjugate for
/// [`Orientation::Minus`]. Scale is fixed by `ρ(r)/r → 1` at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogProfile<T> {
    pub alpha: T,
    pub r_cap: T,
    pub r_outer: T,
    pub width: T,
    pub orientation: Orientation,
}

pub const DEFAULT_R_CAP: f64 = 0.1;
pub const DEFAULT_R_OUTER: f64 = 5.0;
pub const DEFAULT_WIDTH: f64 = 0.1;

impl<T: Scalar> LogProfile<T> {
    pub fn new(alpha: T, r_cap: T, r_outer: T, width: T, orientation: Orientation) -> Result<Self, BeurlingError> {
        let ok = alpha > -T::one()
            && alpha <= T::one()
            && r_cap > T::zero()
            && r_outer > r_cap
            && width > T::zero()
            && r_outer.is_finite()
            && width.is_finite();
        if !ok {
            return Err(BeurlingError::BadProfile(format!(
                "alpha = {alpha}, r_cap = {r_cap}, r_outer = {r_outer}, width = {width}"
            )));
        }
        Ok(Self { alpha, r_cap, r_outer, width, orientation })
    }

    /// Default shape, orientation chosen by `p`.
    pub fn for_exponent(p: T, alpha: T) -> Result<Self, BeurlingError> {
        Self::new(
            alpha,
            T::lit(DEFAULT_R_CAP),
            T::lit(DEFAULT_R_OUTER),
            T::lit(DEFAULT_WIDTH),
            Orientation::for_exponent(p),
        )
    }

    /// `z` inside the disc of radius `radius`, `radius²/z̄` outside, smoothed.
    pub fn disc(radius: T, width: T) -> Result<Self, BeurlingError> {
        Self::new(T::one(), radius * T::lit(0.5), radius, width, Orientation::Plus)
    }

    pub fn slope(&self, t: T) -> T {
        let w = self.width;
        let one = T::one();
        one - (one - self.alpha) * logistic((t - self.r_cap.ln()) / w)
            - (one + self.alpha) * logistic((t - self.r_outer.ln()) / w)
    }

    /// `ln(ρ/r)` at `t = ln r`.
    pub fn log_q(&self, t: T) -> T {
        let w = self.width;
        let one = T::one();
        -(one - self.alpha) * w * softplus((t - self.r_cap.ln()) / w)
            - (one + self.alpha) * w * softplus((t - self.r_outer.ln()) / w)
    }

    /// `(|f_z|, |f_z̄|)` at radius `r > 0`.
    pub fn moduli(&self, r: T) -> (T, T) {
        let t = r.ln();
        let half_q = T::lit(0.5) * self.log_q(t).exp();
        let a = self.slope(t);
        let (big, small) = (half_q * (T::one() + a), half_q * (T::one() - a));
        match self.orientation {
            Orientation::Plus => (big, small),
            Orientation::Minus => (small, big),
        }
    }

    /// `(f_z, f_z̄)` at `z`.
    pub fn derivatives(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let r = z.norm();
        let (u, v) = if r > T::zero() {
            self.moduli(r)
        } else {
            // Both slopes equal one at the origin.
            match self.orientation {
                Orientation::Plus => (T::one(), T::zero()),
                Orientation::Minus => (T::zero(), T::one()),
            }
        };
        let phase = if r > T::zero() { z / z.conj() } else { Complex::new(T::one(), T::zero()) };
        match self.orientation {
            Orientation::Plus => (Complex::new(u, T::zero()), -phase * v),
            Orientation::Minus => (-phase.conj() * u, Complex::new(v, T::zero())),
        }
    }

    /// Sampled `f_z̄`. The mean is kept: the transform drops it anyway and
    /// removing it would only add a constant to the denominator norm.
    pub fn omega(&self, n: usize, l: T) -> Result<GridField<T>, BeurlingError> {
        GridField::sample(n, l, |z| self.derivatives(z).1)
    }

    /// Sampled `f_z`.
    pub fn d_z_field(&self, n: usize, l: T) -> Result<GridField<T>, BeurlingError> {
        GridField::sample(n, l, |z| self.derivatives(z).0)
    }
}

impl LogProfile<f64> {
    /// `‖f_z‖_p / ‖f_z̄‖_p` over the whole plane, by quadrature in `ln r`.
    pub fn continuum_ratio(&self, p: f64) -> Result<f64, BeurlingError> {
        let (tc, tr) = (self.r_cap.ln(), self.r_outer.ln());
        let lo = tc - 40.0 - 40.0 * self.width;
        let hi = tr + 40.0 * self.width + 80.0 / (2.0 * p - 2.0).min(2.0);
        let part = |which: usize| -> Result<f64, BeurlingError> {
            let g = |t: f64| {
                let m = self.moduli(t.exp());
                let v = if which == 0 { m.0 } else { m.1 };
                v.powf(p) * (2.0 * t).exp()
            };
            let mut total = 0.0;
            for (a, b) in [(lo, tc), (tc, tr), (tr, hi)] {
                total += quad::integrate(&g, a, b, 1e-12, 0.0, 4000)?.0;
            }
            Ok(total)
        };
        let (num, den) = (part(0)?, part(1)?);
        if den <= 0.0 {
            return Err(BeurlingError::ZeroDenominator);
        }
        Ok((num / den).powf(1.0 / p))
    }
}
