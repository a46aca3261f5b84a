use bvlab_kernel::{Exponent, IntegrandId};
use bvlab_report::{ExperimentReport, Verdict};

use crate::energy::energy_quadrature;
use crate::quad::integrate;
use crate::derivatives::radial_moduli;
use crate::{Orientation, PowerPiece, RadialError, RadialProfile, RhoFamily};

/// `|total| ≤ TOTAL_TOL · inner` is asserted.
pub const TOTAL_TOL: f64 = 1e-8;

/// Energy of `z` on `|z| ≤ R` glued to `R²/z̄` outside, with coefficient `M = p - 1`.
///
/// The outer part is integrated up to `r_outer` and the rest is added in
/// closed form. The same total with the coefficient `p* - 1` is reported
/// as a metric; it differs from zero for `p < 2`.
pub fn example_11_energy(e: &Exponent<f64>, big_r: f64, r_outer: f64) -> Result<ExperimentReport, RadialError> {
    let p = e.p();
    if !(big_r > 0.0 && r_outer > big_r) {
        return Err(RadialError::BadProfile(format!("need 0 < R < r_outer, got R={big_r}, r_outer={r_outer}")));
    }
    let m = p - 1.0;
    let id = IntegrandId::BurkholderM(m);
    let inner_prof = RadialProfile::new(RhoFamily::identity(), big_r, Orientation::Plus)?;
    let inner = energy_quadrature(&id, &inner_prof, e)?.value;
    let glued = RadialProfile::new(
        RhoFamily::PiecewisePower {
            pieces: vec![
                PowerPiece { start: 0.0, c: 1.0, alpha: 1.0 },
                PowerPiece { start: big_r, c: big_r * big_r, alpha: -1.0 },
            ],
        },
        r_outer,
        Orientation::Plus,
    )?;
    glued.check_energy_admissible(p)?;
    let f = |r: f64| {
        let (x, y) = radial_moduli(&glued, r);
        std::f64::consts::TAU * r * id.eval_moduli(e, x, y)
    };
    // outer integrand decays like r^(1-2p): integrate in log r
    let g = |t: f64| {
        let r = t.exp();
        f(r) * r
    };
    let (outer, _) = integrate(&g, big_r.ln(), r_outer.ln(), 1e-13, 0.0, 4000)?;
    let pi = std::f64::consts::PI;
    let tail = -m * pi * big_r.powf(2.0 * p) * r_outer.powf(2.0 - 2.0 * p) / (p - 1.0);
    let total = inner + outer + tail;
    let ratio = e.burkholder_norm() / m;
    let total_p_star = inner + ratio * (outer + tail);
    Ok(ExperimentReport::new("zero-energy-disc")
        .param("p", p)
        .param("R", big_r)
        .param("r_outer", r_outer)
        .param("coefficient", m)
        .metric("inner", inner)
        .metric("inner_exact", pi * big_r * big_r)
        .metric("outer", outer)
        .metric("tail", tail)
        .metric("total", total)
        .metric("relative_total", total.abs() / inner)
        .metric("total_with_p_star_coefficient", total_p_star)
        .with_verdict(Verdict::from_check(total.abs() <= TOTAL_TOL * inner)))
}
