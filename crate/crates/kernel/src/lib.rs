//! Exact evaluation of the Burkholder family of isotropic integrands.
//!
//! A planar gradient is stored as the pair `(f_z, f_zbar)` of complex numbers.
//! Every isotropic integrand only sees the moduli `(|f_z|, |f_zbar|)`, so the
//! evaluators route through [`PlanarGradient::moduli`].
//!
//! The math is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! bottom of this file fix the scalar to `f64` for everyday use.

mod error;
mod exponent;
mod gradient;
mod integrand;
mod matrix;
mod scalar;
mod vnorm;

pub use error::KernelError;
pub use exponent::{Exponent, P_MAX};
pub use gradient::PlanarGradient;
pub use integrand::{
    distortion, eval_aubert, eval_beurling_m, eval_burkholder, eval_burkholder_m,
    eval_burkholder_real_form, eval_envelope_closed_form, eval_higher_dim, IntegrandId, Sign,
};
pub use matrix::MatrixN;
pub use scalar::Scalar;
pub use vnorm::{vnorm, vnorm_integrand, VnormResult, VNORM_SCAN_POINTS};

pub type Complex<T> = num_complex::Complex<T>;

pub type Exponent64 = Exponent<f64>;
pub type Gradient = PlanarGradient<f64>;
pub type Matrix = MatrixN<f64>;
pub type Integrand = IntegrandId<f64>;
pub type C64 = num_complex::Complex64;
