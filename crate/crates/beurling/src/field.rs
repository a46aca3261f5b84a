use bvlab_kernel::Scalar;
use num_complex::Complex;

use crate::BeurlingError;

pub const MIN_N: usize = 64;

/// `n × n` complex samples on the torus `[−L/2, L/2)²`, cell centred,
/// stored row-major with `values[j * n + i]` at `(x_i, y_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    n: usize,
    l: T,
    values: Vec<Complex<T>>,
}

pub(crate) fn check_shape<T: Scalar>(n: usize, l: T) -> Result<(), BeurlingError> {
    if n < MIN_N || !n.is_power_of_two() {
        return Err(BeurlingError::BadSize { n, min: MIN_N });
    }
    if !(l > T::zero() && l.is_finite()) {
        return Err(BeurlingError::BadPeriod(l.to_f64_lossy()));
    }
    Ok(())
}

impl<T: Scalar> GridField<T> {
    pub fn new(n: usize, l: T, values: Vec<Complex<T>>) -> Result<Self, BeurlingError> {
        check_shape(n, l)?;
        if values.len() != n * n {
            return Err(BeurlingError::ValueCount { expected: n * n, got: values.len() });
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(BeurlingError::NonFinite { i: k % n, j: k / n });
        }
        Ok(Self { n, l, values })
    }

    pub fn zeros(n: usize, l: T) -> Result<Self, BeurlingError> {
        Self::new(n, l, vec![Complex::new(T::zero(), T::zero()); n * n])
    }

    /// Samples `f(z)` at the cell centres.
    pub fn sample(n: usize, l: T, f: impl Fn(Complex<T>) -> Complex<T> + Sync) -> Result<Self, BeurlingError> {
        use rayon::prelude::*;
        check_shape(n, l)?;
        let h = l / T::from_usize_lossy(n);
        let half = T::lit(0.5);
        let coord = |k: usize| -half * l + (T::from_usize_lossy(k) + half) * h;
        let values = (0..n * n)
            .into_par_iter()
            .map(|k| f(Complex::new(coord(k % n), coord(k / n))))
            .collect();
        Self::new(n, l, values)
    }

    /// Trusted constructor for transforms of an already valid field.
    pub(crate) fn from_parts(n: usize, l: T, values: Vec<Complex<T>>) -> Self {
        Self { n, l, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> T {
        self.l
    }

    pub fn spacing(&self) -> T {
        self.l / T::from_usize_lossy(self.n)
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn coord(&self, k: usize) -> T {
        let half = T::lit(0.5);
        -half * self.l + (T::from_usize_lossy(k) + half) * self.spacing()
    }

    pub fn mean(&self) -> Complex<T> {
        let s = self.values.iter().fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b);
        s / T::from_usize_lossy(self.values.len())
    }

    pub fn subtract_mean(&mut self) {
        let m = self.mean();
        self.values.iter_mut().for_each(|v| *v -= m);
    }

    /// Midpoint-rule `‖·‖_p` on the torus.
    pub fn lp_norm(&self, p: T) -> T {
        let h = self.spacing();
        let sum = pairwise(&self.values, &|v: &Complex<T>| v.norm().powf(p));
        (sum * h * h).powf(p.recip())
    }

    pub fn l2_distance(&self, other: &GridField<T>) -> T {
        let diff: Vec<Complex<T>> = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        let h = self.spacing();
        (pairwise(&diff, &|v: &Complex<T>| v.norm_sqr()) * h * h).sqrt()
    }
}

fn pairwise<T: Scalar, V>(xs: &[V], f: &impl Fn(&V) -> T) -> T {
    if xs.len() <= 256 {
        return xs.iter().fold(T::zero(), |a, x| a + f(x));
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise(a, f) + pairwise(b, f)
}
