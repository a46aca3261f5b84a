use std::sync::Arc;

use bvlab_kernel::Scalar;
use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftNum, FftPlanner};

use crate::field::check_shape;
use crate::{BeurlingError, GridField};

/// Forward and inverse FFT plans for one grid size, shared read-only.
#[derive(Clone)]
pub struct BeurlingPlan<T: FftNum> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: FftNum> std::fmt::Debug for BeurlingPlan<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BeurlingPlan").field("n", &self.n).finish()
    }
}

/// Signed integer frequency of FFT index `k`; the Nyquist index maps to `−n/2`.
pub fn signed_frequency(k: usize, n: usize) -> isize {
    if k < n / 2 {
        k as isize
    } else {
        k as isize - n as isize
    }
}

impl<T: Scalar + FftNum> BeurlingPlan<T> {
    pub fn new(n: usize) -> Result<Self, BeurlingError> {
        check_shape(n, T::one())?;
        let mut planner = FftPlanner::new();
        Ok(Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, f: &GridField<T>) -> Result<(), BeurlingError> {
        if f.n() != self.n {
            return Err(BeurlingError::PlanMismatch { plan: self.n, field: f.n() });
        }
        Ok(())
    }

    fn pass(&self, data: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>) {
        let n = self.n;
        data.par_chunks_mut(n).for_each_init(
            || vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    }

    fn transpose(&self, data: &mut [Complex<T>]) {
        let n = self.n;
        for j in 0..n {
            for i in j + 1..n {
                data.swap(j * n + i, i * n + j);
            }
        }
    }

    /// Unnormalised 2-D DFT.
    pub fn forward(&self, f: &GridField<T>) -> Result<Vec<Complex<T>>, BeurlingError> {
        self.check(f)?;
        let mut data = f.values().to_vec();
        self.pass(&mut data, &self.forward);
        self.transpose(&mut data);
        self.pass(&mut data, &self.forward);
        self.transpose(&mut data);
        Ok(data)
    }

    /// Inverse of [`forward`](Self::forward), including the `1/n²` factor.
    pub fn inverse(&self, mut spec: Vec<Complex<T>>, l: T) -> GridField<T> {
        self.pass(&mut spec, &self.inverse);
        self.transpose(&mut spec);
        self.pass(&mut spec, &self.inverse);
        self.transpose(&mut spec);
        let scale = T::from_usize_lossy(self.n * self.n).recip();
        spec.iter_mut().for_each(|v| *v *= scale);
        GridField::from_parts(self.n, l, spec)
    }

    /// `κ = k₁ + i k₂` for FFT index `(i, j)`, angular frequencies for period `l`.
    pub fn kappa(&self, i: usize, j: usize, l: T) -> Complex<T> {
        let w = T::lit(2.0) * T::PI() / l;
        let k1 = T::lit(signed_frequency(i, self.n) as f64) * w;
        let k2 = T::lit(signed_frequency(j, self.n) as f64) * w;
        Complex::new(k1, k2)
    }

    /// Applies a Fourier multiplier `m(i, j, κ)`.
    pub fn apply_multiplier(
        &self,
        f: &GridField<T>,
        m: impl Fn(usize, usize, Complex<T>) -> Complex<T> + Sync,
    ) -> Result<GridField<T>, BeurlingError> {
        let mut spec = self.forward(f)?;
        let n = self.n;
        let l = f.period();
        spec.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            for (i, v) in row.iter_mut().enumerate() {
                *v *= m(i, j, self.kappa(i, j, l));
            }
        });
        Ok(self.inverse(spec, l))
    }

    /// The Beurling transform: multiplier `conj(κ)/κ`, zero at `κ = 0`.
    pub fn apply(&self, f: &GridField<T>) -> Result<GridField<T>, BeurlingError> {
        self.apply_multiplier(f, |_, _, k| beurling_symbol(k))
    }

    fn derivative(&self, f: &GridField<T>, conj: bool) -> Result<GridField<T>, BeurlingError> {
        let n = self.n;
        let half_i = Complex::new(T::zero(), T::lit(0.5));
        self.apply_multiplier(f, |i, j, k| {
            if i == n / 2 || j == n / 2 {
                Complex::new(T::zero(), T::zero())
            } else if conj {
                half_i * k.conj()
            } else {
                half_i * k
            }
        })
    }

    /// Spectral `∂/∂z`, Nyquist modes dropped.
    pub fn d_z(&self, f: &GridField<T>) -> Result<GridField<T>, BeurlingError> {
        self.derivative(f, true)
    }

    /// Spectral `∂/∂z̄`, Nyquist modes dropped.
    pub fn d_zbar(&self, f: &GridField<T>) -> Result<GridField<T>, BeurlingError> {
        self.derivative(f, false)
    }
}

pub fn beurling_symbol<T: Scalar>(k: Complex<T>) -> Complex<T> {
    if k.re == T::zero() && k.im == T::zero() {
        Complex::new(T::zero(), T::zero())
    } else {
        k.conj() / k
    }
}

/// One-shot transform that plans internally.
pub fn beurling_apply<T: Scalar + FftNum>(f: &GridField<T>) -> Result<GridField<T>, BeurlingError> {
    BeurlingPlan::new(f.n())?.apply(f)
}
