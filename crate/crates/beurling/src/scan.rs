use std::io::Write;

use bvlab_kernel::{Exponent, Scalar};
use bvlab_report::{ExperimentReport, Verdict};
use rayon::prelude::*;
use rustfft::FftNum;

use crate::{BeurlingError, BeurlingPlan, GridField, LogProfile};

pub const DEFAULT_N: usize = 1024;
pub const DEFAULT_L: f64 = 40.0;
/// Relative slack over `p* − 1` tolerated for discretisation.
pub const ALLOWANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormEstimate<T> {
    pub p: T,
    /// `‖Sω‖_p / ‖ω‖_p` on the grid.
    pub ratio: T,
    pub family_parameter: T,
    pub n: usize,
    pub l: T,
    /// Plane value of the same ratio, NaN when not computed.
    pub continuum: f64,
}

/// `‖Sω‖_p / ‖ω‖_p` with midpoint sums.
pub fn lp_ratio<T: Scalar + FftNum>(
    plan: &BeurlingPlan<T>,
    omega: &GridField<T>,
    p: T,
) -> Result<NormEstimate<T>, BeurlingError> {
    Exponent::new(p)?;
    let den = omega.lp_norm(p);
    if !(den > T::zero()) {
        return Err(BeurlingError::ZeroDenominator);
    }
    let s = plan.apply(omega)?;
    Ok(NormEstimate {
        p,
        ratio: s.lp_norm(p) / den,
        family_parameter: T::nan(),
        n: omega.n(),
        l: omega.period(),
        continuum: f64::NAN,
    })
}

/// Lower end of the admissible `alpha` window.
pub fn alpha_floor(p: f64) -> f64 {
    1.0 - 2.0 / p
}

pub fn check_alpha(p: f64, alpha: f64) -> Result<(), BeurlingError> {
    let lo = alpha_floor(p);
    if alpha > lo && alpha < 1.0 {
        Ok(())
    } else {
        Err(BeurlingError::AlphaOutOfRange { alpha, lo, p })
    }
}

/// Six values approaching the floor of the window.
pub fn default_alphas(p: f64) -> Vec<f64> {
    let lo = alpha_floor(p);
    [0.4, 0.3, 0.2, 0.1, 0.05, 0.02].iter().map(|f| lo + (1.0 - lo) * f).collect()
}

/// `lp_ratio` for the log-profile family at each `alpha`, on one plan.
pub fn scan_with(
    plan: &BeurlingPlan<f64>,
    p: f64,
    alphas: &[f64],
    l: f64,
) -> Result<Vec<NormEstimate<f64>>, BeurlingError> {
    Exponent::new(p)?;
    for &a in alphas {
        check_alpha(p, a)?;
    }
    alphas
        .par_iter()
        .map(|&a| {
            let prof = LogProfile::for_exponent(p, a)?;
            let omega = prof.omega(plan.n(), l)?;
            let mut est = lp_ratio(plan, &omega, p)?;
            est.family_parameter = a;
            est.continuum = prof.continuum_ratio(p)?;
            Ok(est)
        })
        .collect()
}

pub fn norm_lower_bound_scan(
    p: f64,
    alphas: &[f64],
    n: usize,
    l: f64,
) -> Result<Vec<NormEstimate<f64>>, BeurlingError> {
    scan_with(&BeurlingPlan::new(n)?, p, alphas, l)
}

pub fn best(estimates: &[NormEstimate<f64>]) -> Option<&NormEstimate<f64>> {
    estimates.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio))
}

/// Scan plus a half-resolution rerun of the best parameter.
pub fn scan_report(p: f64, alphas: &[f64], n: usize, l: f64) -> ExperimentReport {
    let mut report = ExperimentReport::new("beurling.scan").param("p", p).param("n", n).param("L", l);
    report.set_param("alphas", alphas.to_vec());
    let exp = match Exponent::new(p) {
        Ok(e) => e,
        Err(_) => return report.refuse("p > 1"),
    };
    if alphas.is_empty() || alphas.iter().any(|&a| check_alpha(p, a).is_err()) {
        return report.refuse("alpha in (1 - 2/p, 1)");
    }
    let est = match norm_lower_bound_scan(p, alphas, n, l) {
        Ok(e) => e,
        Err(_) => return report.refuse("valid grid"),
    };
    let target = exp.burkholder_norm();
    let cap = target * (1.0 + ALLOWANCE);
    let top = *best(&est).expect("non-empty scan");
    let max_ratio = top.ratio;
    let half = norm_lower_bound_scan(p, &[top.family_parameter], n / 2, l)
        .ok()
        .and_then(|v| v.first().map(|e| e.ratio))
        .unwrap_or(f64::NAN);
    for e in &est {
        report.set_metric(&format!("ratio_alpha_{}", e.family_parameter), e.ratio);
    }
    report
        .metric("best_ratio", top.ratio)
        .metric("best_alpha", top.family_parameter)
        .metric("best_continuum", top.continuum)
        .metric("best_ratio_half_n", half)
        .metric("target", target)
        .metric("upper_allowance", cap)
        .metric("max_ratio", max_ratio)
        .with_verdict(Verdict::from_check(max_ratio <= cap))
}

pub fn write_scan_csv<W: Write>(estimates: &[NormEstimate<f64>], out: W) -> Result<(), BeurlingError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "ratio", "n", "L", "continuum"])?;
    for e in estimates {
        w.write_record([
            e.family_parameter.to_string(),
            e.ratio.to_string(),
            e.n.to_string(),
            e.l.to_string(),
            e.continuum.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
