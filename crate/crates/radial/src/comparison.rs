use bvlab_kernel::{Exponent, IntegrandId, PlanarGradient, Scalar};
use bvlab_report::{ExperimentReport, Verdict};
use rand::Rng;

use crate::quad::{gauss_legendre, pairwise_sum};
use crate::RadialError;

pub type Mat2<T> = [[T; 2]; 2];

/// Violations below `VIOLATION_TOL·(1 + |rhs|)` are attributed to quadrature.
pub const VIOLATION_TOL: f64 = 1e-8;
pub const DEFAULT_THETA: usize = 512;

/// Piecewise-linear `Λ : [0, R] → ℝ^{2×2}`; the last knot is `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixProfile<T> {
    knots: Vec<T>,
    values: Vec<Mat2<T>>,
}

impl<T: Scalar> MatrixProfile<T> {
    pub fn new(knots: Vec<T>, values: Vec<Mat2<T>>) -> Result<Self, RadialError> {
        if knots.len() < 2 || knots.len() != values.len() || knots[0] != T::zero() {
            return Err(RadialError::BadProfile(
                "need at least two knots starting at 0, one matrix per knot".into(),
            ));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(RadialError::BadProfile("knots must increase".into()));
        }
        if values.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(RadialError::BadProfile("non-finite matrix entry".into()));
        }
        Ok(Self { knots, values })
    }

    pub fn constant(m: Mat2<T>, radius: T) -> Self {
        Self { knots: vec![T::zero(), radius], values: vec![m, m] }
    }

    pub fn radius(&self) -> T {
        *self.knots.last().unwrap()
    }

    pub fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    /// `(Λ(r), Λ'(r))` on segment `k`.
    fn on_segment(&self, k: usize, r: T) -> (Mat2<T>, Mat2<T>) {
        let (r0, r1) = (self.knots[k], self.knots[k + 1]);
        let (a, b) = (self.values[k], self.values[k + 1]);
        let t = (r - r0) / (r1 - r0);
        let mut m = [[T::zero(); 2]; 2];
        let mut d = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][j] + (b[i][j] - a[i][j]) * t;
                d[i][j] = (b[i][j] - a[i][j]) / (r1 - r0);
            }
        }
        (m, d)
    }

    pub fn eval(&self, r: T) -> (Mat2<T>, Mat2<T>) {
        let k = self.knots[..self.knots.len() - 1]
            .iter()
            .rposition(|&kn| kn <= r)
            .unwrap_or(0);
        self.on_segment(k, r)
    }
}

impl MatrixProfile<f64> {
    /// `Λ(0)` with entries in `[-1, 1]` and slopes bounded by `slope` on
    /// `segments` equal pieces of `[0, radius]`.
    pub fn random<R: Rng>(rng: &mut R, segments: usize, radius: f64, slope: f64) -> Self {
        let mut m = [[0.0; 2]; 2];
        for v in m.iter_mut().flatten() {
            *v = rng.random_range(-1.0..1.0);
        }
        let h = radius / segments as f64;
        let mut knots = vec![0.0];
        let mut values = vec![m];
        for k in 1..=segments {
            for v in m.iter_mut().flatten() {
                *v += rng.random_range(-slope..slope) * h;
            }
            knots.push(h * k as f64);
            values.push(m);
        }
        Self { knots, values }
    }
}

/// `Df(x) = Λ(r) + r Λ'(r) ê êᵀ` at `x = r ê`.
pub fn radially_linear_gradient<T: Scalar>(
    lam: &MatrixProfile<T>,
    r: T,
    theta: T,
) -> PlanarGradient<T> {
    let (m, d) = lam.eval(r);
    twisted(m, d, r, theta)
}

fn twisted<T: Scalar>(m: Mat2<T>, d: Mat2<T>, r: T, theta: T) -> PlanarGradient<T> {
    let e = [theta.cos(), theta.sin()];
    let mut a = m;
    for i in 0..2 {
        let de = d[i][0] * e[0] + d[i][1] * e[1];
        for j in 0..2 {
            a[i][j] += r * de * e[j];
        }
    }
    PlanarGradient::from_matrix(a)
}

/// `∫_{B_R} E(Df)` by Gauss–Legendre per segment and the trapezoid rule in `θ`.
pub fn radially_linear_energy<T: Scalar>(
    id: &IntegrandId<T>,
    lam: &MatrixProfile<T>,
    e: &Exponent<T>,
    n_r: usize,
    n_theta: usize,
) -> T {
    let (x, w) = gauss_legendre::<T>(n_r);
    let dtheta = T::TAU() / T::from_usize_lossy(n_theta);
    let half = T::lit(0.5);
    let mut rows = Vec::with_capacity(lam.segments() * n_r);
    for k in 0..lam.segments() {
        let (r0, r1) = (lam.knots[k], lam.knots[k + 1]);
        for (xi, wi) in x.iter().zip(&w) {
            let r = r0 + (r1 - r0) * (*xi + T::one()) * half;
            let (m, d) = lam.on_segment(k, r);
            let ring: Vec<T> = (0..n_theta)
                .map(|j| id.eval(e, &twisted(m, d, r, dtheta * T::from_usize_lossy(j))))
                .collect();
            rows.push(pairwise_sum(&ring) * dtheta * r * *wi * (r1 - r0) * half);
        }
    }
    pairwise_sum(&rows)
}

/// Checks `∫_{B_R} E(D[Λ(|x|)x]) ≤ |B_R| E(Λ(R))`.
pub fn radially_linear_comparison(
    id: &IntegrandId<f64>,
    lam: &MatrixProfile<f64>,
    e: &Exponent<f64>,
    n_r: usize,
) -> Result<ExperimentReport, RadialError> {
    id.validate(e)?;
    if n_r == 0 {
        return Err(RadialError::BadGrid("n_r must be positive".into()));
    }
    let lhs = radially_linear_energy(id, lam, e, n_r, DEFAULT_THETA);
    let big_r = lam.radius();
    let (end, _) = lam.eval(big_r);
    let rhs = std::f64::consts::PI * big_r * big_r * id.eval(e, &PlanarGradient::from_matrix(end));
    let violation = lhs - rhs;
    Ok(ExperimentReport::new("radially-linear")
        .param("p", e.p())
        .param("integrand", id.name())
        .param("segments", lam.segments())
        .param("n_r", n_r)
        .param("n_theta", DEFAULT_THETA)
        .metric("lhs", lhs)
        .metric("rhs", rhs)
        .metric("slack", -violation)
        .with_verdict(Verdict::from_check(violation <= VIOLATION_TOL * (1.0 + rhs.abs()))))
}
