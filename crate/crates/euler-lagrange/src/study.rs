use std::io::Write;

use bvlab_radial::{profile_family, RhoFamily};
use bvlab_report::{ExperimentReport, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{
    pde_pair_residual, pde_pair_scaled, radial_el_residual, radial_el_residual_expanded,
    second_equation_as_written, Burkholder, ElError, HomogeneousCubic, IntegrandUV,
};

pub const PDE_TOL: f64 = 1e-9;
pub const RADIAL_TOL: f64 = 1e-8;
pub const UNIQUENESS_TOL: f64 = 1e-4;
pub const GRID_LO: f64 = 1e-3;
pub const GRID_HI: f64 = 1e3;
/// Points with `v < AXIS_RATIO · u` are skipped.
pub const AXIS_RATIO: f64 = 1e-3;
pub const EXPONENTS: [f64; 6] = [1.2, 1.5, 2.0, 3.0, 4.0, 8.0];

/// Log-spaced `(u, v)` pairs on `[lo, hi]²` with `v ≥ AXIS_RATIO · u`.
pub fn log_grid(n: usize, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>, ElError> {
    if n < 2 || !(lo > 0.0 && hi > lo) {
        return Err(ElError::BadGrid(format!("n = {n}, range [{lo}, {hi}]")));
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    let axis: Vec<f64> = (0..n).map(|i| lo * (step * i as f64).exp()).collect();
    Ok(axis
        .iter()
        .flat_map(|&u| axis.iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| v >= AXIS_RATIO * u)
        .collect())
}

#[derive(Clone, Copy, Debug, Default)]
struct Worst {
    first: f64,
    second: f64,
    at_first: (f64, f64),
    at_second: (f64, f64),
}

impl Worst {
    fn merge(self, o: Worst) -> Worst {
        let (first, at_first) = if o.first > self.first { (o.first, o.at_first) } else { (self.first, self.at_first) };
        let (second, at_second) =
            if o.second > self.second { (o.second, o.at_second) } else { (self.second, self.at_second) };
        Worst { first, second, at_first, at_second }
    }
}

fn scan(e: &impl IntegrandUV<f64>, grid: &[(f64, f64)]) -> Worst {
    grid.par_iter()
        .map(|&(u, v)| {
            let (a, b) = pde_pair_scaled(e, u, v);
            // NaN must not hide behind max.
            let a = if a.is_nan() { f64::INFINITY } else { a };
            let b = if b.is_nan() { f64::INFINITY } else { b };
            Worst { first: a, second: b, at_first: (u, v), at_second: (u, v) }
        })
        .reduce(Worst::default, Worst::merge)
}

/// Largest scaled residuals of both equations over the log grid.
pub fn pde_grid_report(e: &impl IntegrandUV<f64>, n: usize) -> ExperimentReport {
    let report = ExperimentReport::new("el.pde_grid").param("integrand", e.name()).param("n", n);
    let grid = match log_grid(n, GRID_LO, GRID_HI) {
        Ok(g) => g,
        Err(_) => return report.refuse("n >= 2"),
    };
    let w = scan(e, &grid);
    let form_gap = grid
        .par_iter()
        .map(|&(u, v)| {
            let (_, r2) = pde_pair_residual(e, u, v);
            let d = e.derivs(u, v);
            let scale = d.euu.abs() + d.evv.abs() + 2.0 * (d.ev / v).abs();
            (second_equation_as_written(e, u, v) - r2).abs() / scale.max(f64::MIN_POSITIVE)
        })
        .reduce(|| 0.0, f64::max);
    report
        .param("points", grid.len())
        .metric("max_first_scaled", w.first)
        .metric("max_second_scaled", w.second)
        .metric("second_form_gap", form_gap)
        .point("worst_first", vec![w.at_first.0, w.at_first.1])
        .point("worst_second", vec![w.at_second.0, w.at_second.1])
        .with_verdict(Verdict::from_check(w.first <= PDE_TOL && w.second <= PDE_TOL))
}

/// The Burkholder integrand with `M = p − 1` against both equations for every exponent.
pub fn burkholder_pde_study(ps: &[f64], n: usize) -> ExperimentReport {
    let mut report = ExperimentReport::new("el.burkholder_pde").param("n", n);
    let mut worst = 0.0_f64;
    for &p in ps {
        let child = pde_grid_report(&Burkholder::critical(p), n).param("p", p);
        worst = worst.max(child.metric_or_nan("max_first_scaled")).max(child.metric_or_nan("max_second_scaled"));
        report.push_child(child);
    }
    report.metric("max_scaled_residual", worst)
}

/// Radii at which the radial equation is sampled: log-spaced in `[R/1000, R]`.
pub fn sample_radii(radius: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| radius * 1e-3_f64.powf(1.0 - i as f64 / (n - 1).max(1) as f64)).collect()
}

/// Radial equation for the Burkholder integrand on the `C²` profiles of the
/// standard family that satisfy `ρ > rρ'`.
pub fn radial_el_study(p: f64) -> ExperimentReport {
    let e = Burkholder::critical(p);
    let mut report = ExperimentReport::new("el.radial").param("p", p).param("integrand", e.name());
    let mut worst = 0.0_f64;
    let mut form_gap = 0.0_f64;
    let mut used = 0usize;
    for (name, rho, radius) in profile_family() {
        if !rho.is_c2() {
            continue;
        }
        let mut max_here = 0.0_f64;
        let mut admissible = true;
        for r in sample_radii(radius, 33) {
            match radial_el_residual(&e, &rho, r) {
                Ok(res) => {
                    let s = res.scaled();
                    max_here = max_here.max(if s.is_nan() { f64::INFINITY } else { s });
                    let expanded = radial_el_residual_expanded(&e, &rho, r).unwrap_or(f64::NAN);
                    let gap = (expanded * r - res.residual).abs() / res.scale.max(f64::MIN_POSITIVE);
                    form_gap = form_gap.max(if gap.is_nan() { f64::INFINITY } else { gap });
                }
                Err(_) => {
                    admissible = false;
                    break;
                }
            }
        }
        if admissible {
            used += 1;
            report.set_metric(&format!("{name}.max_scaled"), max_here);
            worst = worst.max(max_here);
        }
    }
    let ok = used > 0 && worst <= RADIAL_TOL && form_gap <= RADIAL_TOL;
    report
        .metric("profiles", used as f64)
        .metric("max_scaled_residual", worst)
        .metric("expanded_form_gap", form_gap)
        .with_verdict(Verdict::from_check(ok))
}

/// Distance of the coefficient vector from the line spanned by the Burkholder
/// polynomial `1 − p t`, relative to its length.
pub fn distance_from_burkholder(p: f64, c: &[f64; 4]) -> f64 {
    let b = [1.0, -p, 0.0, 0.0];
    let bb: f64 = b.iter().map(|x| x * x).sum();
    let cb: f64 = c.iter().zip(&b).map(|(x, y)| x * y).sum();
    let cc: f64 = c.iter().map(|x| x * x).sum();
    if cc == 0.0 {
        return 0.0;
    }
    let perp: f64 = c.iter().zip(&b).map(|(x, y)| (x - cb / bb * y).powi(2)).sum();
    (perp / cc).sqrt()
}

/// Draws random homogeneous cubic integrands away from the Burkholder line.
pub fn random_cubics(p: f64, count: usize, seed: u64) -> Vec<HomogeneousCubic<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let coeffs = [0; 4].map(|_| rng.random_range(-1.0..1.0));
        if distance_from_burkholder(p, &coeffs) > 0.1 {
            out.push(HomogeneousCubic { p, coeffs });
        }
    }
    out
}

/// Every random non-Burkholder integrand must violate one of the equations by
/// more than `UNIQUENESS_TOL` (scaled) somewhere on the grid.
pub fn uniqueness_probe(p: f64, count: usize, seed: u64, n: usize) -> ExperimentReport {
    let report = ExperimentReport::new("el.uniqueness")
        .param("p", p)
        .param("count", count)
        .param("seed", seed)
        .param("n", n);
    let grid = match log_grid(n, GRID_LO, GRID_HI) {
        Ok(g) => g,
        Err(_) => return report.refuse("n >= 2"),
    };
    let mut weakest = f64::INFINITY;
    let mut caught = 0usize;
    for e in random_cubics(p, count, seed) {
        let w = scan(&e, &grid);
        let m = w.first.max(w.second);
        weakest = weakest.min(m);
        if m > UNIQUENESS_TOL {
            caught += 1;
        }
    }
    report
        .metric("caught", caught as f64)
        .metric("weakest_violation", weakest)
        .with_verdict(Verdict::from_check(caught == count))
}

/// Writes `u,v,first,second,first_scaled,second_scaled` rows.
pub fn write_residual_csv<W: Write>(
    e: &impl IntegrandUV<f64>,
    grid: &[(f64, f64)],
    out: W,
) -> Result<(), ElError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["u", "v", "first", "second", "first_scaled", "second_scaled"])?;
    for &(u, v) in grid {
        let (a, b) = pde_pair_residual(e, u, v);
        let (sa, sb) = pde_pair_scaled(e, u, v);
        w.write_record([u, v, a, b, sa, sb].map(|x| x.to_string()))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Radial residuals along one profile.
pub fn radial_samples(
    e: &impl IntegrandUV<f64>,
    rho: &RhoFamily<f64>,
    radii: &[f64],
) -> Result<Vec<crate::ElResidual<f64>>, ElError> {
    radii.iter().map(|&r| radial_el_residual(e, rho, r)).collect()
}
