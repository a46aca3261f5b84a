use bvlab_kernel::{Exponent, IntegrandId, Scalar};
use bvlab_report::{ExperimentReport, Verdict};
use rayon::prelude::*;

use crate::derivatives::radial_moduli;
use crate::quad::{integrate, pairwise_sum};
use crate::{Orientation, PowerPiece, RadialError, RadialProfile, RhoFamily};

pub const REL_TOL: f64 = 1e-9;
/// Acceptance bound `|quadrature - closed form| ≤ IDENTITY_TOL·(1 + |closed form|)`.
pub const IDENTITY_TOL: f64 = 1e-7;

const MIN_PANELS: usize = 48;
const CHUNK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate<T> {
    pub value: T,
    /// Sum of local error estimates plus the extrapolated tail.
    pub error: T,
    pub panels: usize,
    pub tail: T,
}

/// `2π ∫₀^R E(|f_z|, |f_zbar|) r dr` for an admissible profile.
///
/// The interval is cut into dyadic panels `[R 2^(-k-1), R 2^(-k)]`, split
/// further at profile breakpoints, and each piece is integrated by adaptive
/// Gauss–Kronrod. Near `0` the integrand behaves like a power of `r`, so the
/// panels below the last one form a geometric series that is summed exactly.
pub fn energy_quadrature<T: Scalar>(
    id: &IntegrandId<T>,
    prof: &RadialProfile<T>,
    e: &Exponent<T>,
) -> Result<EnergyEstimate<T>, RadialError> {
    id.validate(e)?;
    prof.check_energy_admissible(e.p())?;
    integrate_radial(prof, T::lit(REL_TOL) * T::lit(1e-2), |r| {
        let (x, y) = radial_moduli(prof, r);
        T::TAU() * r * id.eval_moduli(e, x, y)
    }, id.degree(e))
}

fn integrate_radial<T: Scalar>(
    prof: &RadialProfile<T>,
    rel_tol: T,
    f: impl Fn(T) -> T + Sync,
    degree: T,
) -> Result<EnergyEstimate<T>, RadialError> {
    let radius = prof.radius;
    let breaks: Vec<T> = prof.rho.breakpoints().into_iter().filter(|&b| b < radius).collect();
    // integrand ~ r^beta near 0
    let beta = prof
        .rho
        .leading_exponent()
        .map(|a| T::one() + degree * (a - T::one()));
    if let Some(b) = beta {
        if !(b > -T::one()) {
            return Err(RadialError::NotAdmissible(format!("integrand ~ r^{b} is not integrable at 0")));
        }
    }
    let q = beta.map(|b| T::lit(2.0).powf(-(b + T::one())));
    let max_panels = ((-T::min_positive_value().log2()).to_f64_lossy() * 0.5) as usize;
    let abs_tol = T::min_positive_value().sqrt();
    let two = T::lit(2.0);
    let panel = |k: usize| -> Result<(T, T), RadialError> {
        let hi = radius / two.powi(k as i32);
        let lo = hi / two;
        let mut cuts = vec![lo];
        cuts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
        cuts.push(hi);
        let mut acc = (T::zero(), T::zero());
        for w in cuts.windows(2) {
            let (v, err) = integrate(&f, w[0], w[1], rel_tol, abs_tol, 4000)?;
            acc = (acc.0 + v, acc.1 + err);
        }
        Ok(acc)
    };
    let mut parts: Vec<(T, T)> = Vec::new();
    let tail = loop {
        let start = parts.len();
        let chunk: Result<Vec<_>, _> = (start..start + CHUNK).into_par_iter().map(panel).collect();
        parts.extend(chunk?);
        let sum = pairwise_sum(&parts.iter().map(|p| p.0).collect::<Vec<_>>());
        let last = parts.last().unwrap().0;
        let tail = q.map_or(T::zero(), |q| last * q / (T::one() - q));
        let small = tail.abs() <= T::epsilon() * T::lit(0.1) * sum.abs().max(abs_tol);
        if (parts.len() >= MIN_PANELS && (small || q.is_none())) || parts.len() + CHUNK > max_panels {
            break tail;
        }
    };
    let value = pairwise_sum(&parts.iter().map(|p| p.0).collect::<Vec<_>>()) + tail;
    let error = parts.iter().fold(T::zero(), |s, p| s + p.1) + tail.abs() * T::lit(1e-3);
    Ok(EnergyEstimate { value, error, panels: parts.len(), tail })
}

/// `±(π p*/p) R^(2-p) ρ(R)^p`, valid for `f₊` with `p ≥ 2` and `f₋` with `p ≤ 2`.
pub fn closed_form_energy<T: Scalar>(
    prof: &RadialProfile<T>,
    e: &Exponent<T>,
) -> Result<T, RadialError> {
    let p = e.p();
    let two = T::lit(2.0);
    let ok = match prof.orientation {
        Orientation::Plus => p >= two,
        Orientation::Minus => p <= two,
    };
    if !ok {
        return Err(RadialError::OrientationMismatch { p: p.to_f64_lossy() });
    }
    let r = prof.radius;
    Ok(prof.orientation.sign::<T>() * T::PI() * e.p_star() / p
        * r.powf(two - p)
        * prof.rho.rho(r).powf(p))
}

/// Twelve admissible profiles used for the energy identity, as `(name, ρ, R)`.
/// Every leading exponent exceeds `1/2`, so all are admissible for `p ≤ 4`.
pub fn profile_family() -> Vec<(&'static str, RhoFamily<f64>, f64)> {
    let pw = |start, c, alpha| PowerPiece { start, c, alpha };
    let c1 = 0.5_f64.powf(0.1);
    vec![
        ("identity", RhoFamily::identity(), 1.0),
        ("double", RhoFamily::power(2.0, 1.0), 2.0),
        ("power-0.6", RhoFamily::power(1.0, 0.6), 1.0),
        ("power-0.8-scaled", RhoFamily::power(0.5, 0.8), 3.0),
        ("sum-0.6-1", RhoFamily::PowerSum { terms: vec![(1.0, 0.6), (1.0, 1.0)] }, 1.0),
        ("sum-0.75-0.9", RhoFamily::PowerSum { terms: vec![(0.5, 0.75), (0.25, 0.9)] }, 2.0),
        (
            "linear-then-0.6",
            RhoFamily::PiecewisePower { pieces: vec![pw(0.0, 1.0, 1.0), pw(0.5, 0.5_f64.powf(0.4), 0.6)] },
            1.0,
        ),
        (
            "0.7-then-linear",
            RhoFamily::PiecewisePower { pieces: vec![pw(0.0, 1.0, 0.7), pw(1.0, 1.0, 1.0)] },
            2.0,
        ),
        (
            "linear-then-decay",
            RhoFamily::PiecewisePower { pieces: vec![pw(0.0, 1.0, 1.0), pw(1.0, 1.0, -0.5)] },
            3.0,
        ),
        (
            "knots-concave",
            RhoFamily::PiecewiseLinear { knots: vec![(0.0, 0.0), (0.5, 0.5), (1.0, 0.75)] },
            1.0,
        ),
        (
            "knots-plateau",
            RhoFamily::PiecewiseLinear { knots: vec![(0.0, 0.0), (0.25, 0.5), (1.5, 0.5)] },
            1.5,
        ),
        (
            "three-pieces",
            RhoFamily::PiecewisePower {
                pieces: vec![pw(0.0, 1.0, 1.0), pw(0.5, c1, 0.9), pw(1.0, c1, -1.0)],
            },
            2.0,
        ),
    ]
}

/// Quadrature against the closed form over [`profile_family`] at exponent `p`,
/// using the orientation the closed form is valid for.
pub fn energy_identity_report(e: &Exponent<f64>) -> Result<ExperimentReport, RadialError> {
    let orientation = Orientation::for_exponent(e.p());
    let mut report = ExperimentReport::new("radial-energy-identity")
        .param("p", e.p())
        .param(
            "orientation",
            match orientation {
                Orientation::Plus => "plus",
                Orientation::Minus => "minus",
            },
        )
        .param("profiles", profile_family().len());
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for (name, rho, radius) in profile_family() {
        let prof = RadialProfile::new(rho, radius, orientation)?;
        let quad = energy_quadrature(&IntegrandId::Burkholder, &prof, e)?;
        let closed = closed_form_energy(&prof, e)?;
        let scaled = (quad.value - closed).abs() / (1.0 + closed.abs());
        worst = worst.max(scaled);
        ok &= scaled <= IDENTITY_TOL;
        report.set_metric(&format!("{name}.quadrature"), quad.value);
        report.set_metric(&format!("{name}.closed_form"), closed);
        report.set_metric(&format!("{name}.scaled_error"), scaled);
    }
    report.set_metric("max_scaled_error", worst);
    Ok(report.with_verdict(Verdict::from_check(ok)))
}
