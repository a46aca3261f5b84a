use bvlab_kernel::{Complex, Exponent, IntegrandId, PlanarGradient, Scalar};
use bvlab_report::{ExperimentReport, Verdict};
use rand::Rng;
use rayon::prelude::*;

use crate::derivatives::radial_derivatives_at;
use crate::quad::{gauss_legendre, pairwise_sum};
use crate::{Orientation, RadialError, RadialProfile};

/// Energy bound asserted by the experiment, on top of `π`.
pub const ENERGY_TOL: f64 = 1e-6;
/// Fraction of the smallness bound used when calibrating a field.
pub const MARGIN: f64 = 0.9;

const GL_ORDER: usize = 16;
const SUP_RADII: usize = 200;
const SUP_ANGLES: usize = 256;

/// `ε(z) = k ψ(w) (a + b w)` with `w = (z - z₀)/δ` and `ψ(w) = exp(-1/(1-|w|²))`
/// on `|w| < 1`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpField<T> {
    pub center: Complex<T>,
    pub radius: T,
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub scale: T,
}

impl<T: Scalar> BumpField<T> {
    pub fn zero() -> Self {
        Self {
            center: Complex::new(T::zero(), T::zero()),
            radius: T::lit(0.5),
            a: Complex::new(T::zero(), T::zero()),
            b: Complex::new(T::zero(), T::zero()),
            scale: T::zero(),
        }
    }

    /// `(ε, ε_z, ε_zbar)` at `z`.
    pub fn eval(&self, z: Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let w = (z - self.center).unscale(self.radius);
        let m = T::one() - w.norm_sqr();
        if !(m > T::zero()) || self.scale == T::zero() {
            return (zero, zero, zero);
        }
        let psi = (-T::one() / m).exp();
        let lin = self.a + self.b * w;
        let g = psi / (m * m);
        // ψ_w = -g w̄, ψ_w̄ = -g w
        let psi_w = w.conj().scale(-g);
        let psi_wbar = w.scale(-g);
        let k = self.scale / self.radius;
        (
            lin.scale(psi * self.scale),
            (psi_w * lin + self.b.scale(psi)).scale(k),
            (psi_wbar * lin).scale(k),
        )
    }

    /// Whether the support stays inside `|z| ≤ limit`.
    pub fn support_within(&self, limit: T) -> bool {
        self.center.norm() + self.radius <= limit
    }

    /// `sup ((p-1)|ε_zbar| + |ε_z|)` over a polar sample of the support.
    pub fn smallness(&self, p: T) -> T {
        let mut worst = T::zero();
        for i in 0..SUP_RADII {
            let rw = T::from_usize_lossy(i) / T::from_usize_lossy(SUP_RADII);
            for j in 0..SUP_ANGLES {
                let t = T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(SUP_ANGLES);
                let z = self.center + Complex::from_polar(rw * self.radius, t);
                let (_, ez, ezb) = self.eval(z);
                worst = worst.max((p - T::one()) * ezb.norm() + ez.norm());
            }
        }
        worst
    }

    /// Rescales so that the smallness measure equals `fraction·(1 - p/s)`.
    pub fn calibrated(mut self, p: T, s: T, fraction: T) -> Self {
        self.scale = T::one();
        let unit = self.smallness(p);
        if unit > T::zero() {
            self.scale = fraction * (T::one() - p / s) / unit;
        }
        self
    }

    pub fn scaled(mut self, k: T) -> Self {
        self.scale *= k;
        self
    }
}

impl BumpField<f64> {
    /// Random bump supported in `|z| ≤ 0.9`, calibrated with [`MARGIN`].
    pub fn random<R: Rng>(rng: &mut R, p: f64, s: f64) -> Self {
        let radius = rng.random_range(0.2..0.4);
        let rc = rng.random_range(0.0..(0.9 - radius));
        let tc = rng.random_range(0.0..std::f64::consts::TAU);
        let mut c = || Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (a, b) = (c(), c());
        Self { center: Complex::from_polar(rc, tc), radius, a, b, scale: 1.0 }.calibrated(p, s, MARGIN)
    }
}

/// Tensor grid on the unit disc: Gauss–Legendre in `u = √r`, trapezoid in `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for PolarGrid {
    fn default() -> Self {
        Self { n_r: 512, n_theta: 512 }
    }
}

struct EnergySample<T> {
    energy: T,
    max_ratio: T,
    max_smallness: T,
}

fn perturbed_energy<T: Scalar>(
    prof: &RadialProfile<T>,
    eps: &BumpField<T>,
    e: &Exponent<T>,
    grid: PolarGrid,
) -> Result<EnergySample<T>, RadialError> {
    if grid.n_r < GL_ORDER || !grid.n_r.is_multiple_of(GL_ORDER) || grid.n_theta < 8 {
        return Err(RadialError::BadGrid(format!(
            "n_r must be a positive multiple of {GL_ORDER} and n_theta >= 8, got {grid:?}"
        )));
    }
    let (x, w) = gauss_legendre::<T>(GL_ORDER);
    let panels = grid.n_r / GL_ORDER;
    let h = T::one() / T::from_usize_lossy(panels);
    let dtheta = T::TAU() / T::from_usize_lossy(grid.n_theta);
    let p = e.p();
    let rows: Result<Vec<(T, T, T)>, RadialError> = (0..grid.n_r)
        .into_par_iter()
        .map(|k| {
            let (panel, node) = (k / GL_ORDER, k % GL_ORDER);
            let u = h * (T::from_usize_lossy(panel) + (x[node] + T::one()) * T::lit(0.5));
            let weight = w[node] * h * T::lit(0.5) * T::lit(2.0) * u * u * u * dtheta;
            let r = u * u;
            let mut row = Vec::with_capacity(grid.n_theta);
            let (mut ratio, mut small) = (T::zero(), T::zero());
            for j in 0..grid.n_theta {
                let z = Complex::from_polar(r, dtheta * T::from_usize_lossy(j));
                let g = radial_derivatives_at(prof, z)?;
                let (_, ez, ezb) = eps.eval(z);
                let gp = PlanarGradient::new(g.xi + ez, g.zeta + ezb);
                let (a, b) = gp.moduli();
                ratio = ratio.max(b / a);
                small = small.max((p - T::one()) * ezb.norm() + ez.norm());
                row.push(IntegrandId::Burkholder.eval_moduli(e, a, b));
            }
            Ok((pairwise_sum(&row) * weight, ratio, small))
        })
        .collect();
    let rows = rows?;
    Ok(EnergySample {
        energy: pairwise_sum(&rows.iter().map(|r| r.0).collect::<Vec<_>>()),
        max_ratio: rows.iter().fold(T::zero(), |m, r| m.max(r.1)),
        max_smallness: rows.iter().fold(T::zero(), |m, r| m.max(r.2)),
    })
}

/// Burkholder energy of `ρ(|z|) z/|z| + ε(z)` on the unit disc against `π`.
///
/// Refuses to assert (verdict not-asserted) when the profile or the field
/// violates the experiment's preconditions.
pub fn local_max_experiment(
    prof: &RadialProfile<f64>,
    s: f64,
    eps: &BumpField<f64>,
    e: &Exponent<f64>,
    grid: PolarGrid,
) -> Result<ExperimentReport, RadialError> {
    let p = e.p();
    let bound = 1.0 - p / s;
    let mut report = ExperimentReport::new("local-max")
        .param("p", p)
        .param("s", s)
        .param("n_r", grid.n_r)
        .param("n_theta", grid.n_theta)
        .param("bump_scale", eps.scale)
        .param("bump_radius", eps.radius)
        .param("bump_center", vec![eps.center.re, eps.center.im]);
    let mut refusal = None;
    if prof.orientation != Orientation::Plus {
        refusal = Some("profile must use the plus orientation".to_string());
    } else if let Err(err) = prof.check_local_max_admissible(s, p) {
        refusal = Some(err.to_string());
    } else if !eps.support_within(1.0) {
        refusal = Some("perturbation support leaves the unit disc".to_string());
    }
    let smallness = eps.smallness(p);
    report.set_metric("smallness", smallness);
    report.set_metric("smallness_bound", bound);
    let sample = perturbed_energy(prof, eps, e, grid)?;
    let smallness = smallness.max(sample.max_smallness);
    if refusal.is_none() && smallness > bound {
        refusal = Some(format!("smallness {smallness:.6} exceeds 1 - p/s = {bound:.6}"));
    }
    let pi = std::f64::consts::PI;
    report.set_metric("energy", sample.energy);
    report.set_metric("deficit", pi - sample.energy);
    report.set_metric("max_distortion_ratio", sample.max_ratio);
    report.set_metric("distortion_bound", 1.0 / (p - 1.0));
    if let Some(reason) = refusal {
        return Ok(report.refuse(&reason));
    }
    let ok = sample.energy <= pi + ENERGY_TOL && sample.max_ratio <= 1.0 / (p - 1.0) + 1e-12;
    Ok(report.with_verdict(Verdict::from_check(ok)))
}
