//! The verification battery. Each check returns a report whose children
//! are the individual sub-checks.

use std::f64::consts::PI;

use bvlab_beurling as beurling;
use bvlab_el as el;
use bvlab_envelope::{closed_form_study, EnvelopeConfig};
use bvlab_kernel::{eval_burkholder, eval_burkholder_real_form, vnorm_integrand, Exponent, Gradient, IntegrandId, C64};
use bvlab_probe::{probe_aubert_threshold, probe_rank_one_concavity, transition, Config, DEFAULT_BASES};
use bvlab_radial::{
    energy_identity_report, example_11_energy, local_max_experiment, radially_linear_comparison, Bump, BumpField,
    MatrixProfile, Orientation, PolarGrid, RadialProfile, RhoFamily,
};
use bvlab_report::{ExperimentReport, Verdict};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EXPONENTS: [f64; 6] = [1.2, 1.5, 2.0, 3.0, 4.0, 8.0];
pub const SEED: u64 = 20240601;

fn check(name: &str, ok: bool) -> ExperimentReport {
    ExperimentReport::new(name).with_verdict(Verdict::from_check(ok))
}

fn exponent(p: f64) -> Exponent<f64> {
    Exponent::new(p).expect("battery exponents are valid")
}

fn group(name: &str, children: Vec<ExperimentReport>) -> ExperimentReport {
    let mut r = ExperimentReport::new(name);
    for c in children {
        r.push_child(c);
    }
    r
}

fn random_gradient(rng: &mut ChaCha8Rng) -> Gradient {
    let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    Gradient::new(c(), c())
}

/// Complex and real forms of the Burkholder function agree.
pub fn cross_form(ps: &[f64], samples: usize) -> ExperimentReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let children = ps
        .iter()
        .map(|&p| {
            let e = exponent(p);
            let mut worst = 0.0_f64;
            for _ in 0..samples {
                let g = random_gradient(&mut rng);
                let (a, b) = (eval_burkholder(&e, &g), eval_burkholder_real_form(&e, &g));
                let scale = g.op_norm().powf(p).max(a.abs());
                if scale > 0.0 {
                    worst = worst.max((a - b).abs() / scale);
                }
            }
            check(&format!("p={p}"), worst <= 1e-12).param("samples", samples).metric("max_rel_diff", worst)
        })
        .collect();
    group("cross-form", children)
}

/// `sup |B_p|` on the unit segment equals `p* − 1`.
pub fn burkholder_vnorm(ps: &[f64]) -> ExperimentReport {
    let children = ps
        .iter()
        .map(|&p| {
            let e = exponent(p);
            let v = vnorm_integrand(&IntegrandId::Burkholder, &e).value;
            let err = (v - e.burkholder_norm()).abs();
            check(&format!("p={p}"), err <= 1e-6).metric("vnorm", v).metric("error", err)
        })
        .collect();
    group("vnorm", children)
}

fn violation(id: IntegrandId<f64>, e: &Exponent<f64>, cfg: &Config) -> bool {
    probe_rank_one_concavity(&id, e, cfg).map(|r| r.is_violation()).unwrap_or(false)
}

/// Rank-one concavity thresholds for the Burkholder, Aubert and Beurling families.
pub fn rank_one(p: f64) -> ExperimentReport {
    let e = exponent(p);
    let m = e.burkholder_norm();
    let cfg = Config::standard(DEFAULT_BASES);
    let at = !violation(IntegrandId::BurkholderM(m), &e, &cfg);
    let below = violation(IntegrandId::BurkholderM(m - 0.05), &e, &cfg);
    let mt = 2.0 + 3f64.sqrt();
    let grid: Vec<f64> = (0..=20).map(|k| 3.60 + 0.01 * k as f64).collect();
    let bracket = probe_aubert_threshold(&grid, &cfg).ok().and_then(|r| transition(&r));
    let aubert = match bracket {
        Some((bad, good)) => check("aubert-bracket", bad < mt && good > mt && mt - bad <= 0.02 && good - mt <= 0.02)
            .metric("last_violating_m", bad)
            .metric("first_concave_m", good),
        None => check("aubert-bracket", false),
    };
    let e4 = exponent(4.0);
    let near_identity = Config::standard(3).with_bases(vec![Gradient::from_moduli(1.0, 0.0)]);
    let e15 = exponent(1.5);
    let near_anti = Config::standard(3).with_bases(vec![Gradient::from_moduli(0.0, 1.0)]);
    group(
        "rank-one",
        vec![
            check("burkholder-at-threshold-concave", at).param("p", p),
            check("burkholder-below-threshold-violates", below).param("p", p).param("M", m - 0.05),
            aubert,
            check("beurling-p4-near-identity", violation(IntegrandId::BeurlingM(e4.burkholder_norm()), &e4, &near_identity)),
            check(
                "beurling-p1.5-near-anticonformal",
                violation(IntegrandId::BeurlingM(e15.burkholder_norm()), &e15, &near_anti),
            ),
        ],
    )
}

/// Grid envelope against the closed form, refining 65 → 129 → 257.
pub fn envelope(ps: &[f64]) -> ExperimentReport {
    let children = ps
        .iter()
        .map(|&p| match closed_form_study(&exponent(p), &[65, 129, 257], 2.0, &EnvelopeConfig::default()) {
            Ok(r) => r.param("p", p),
            Err(err) => check(&format!("p={p}"), false).note(err.to_string()),
        })
        .collect();
    group("envelope", children)
}

pub fn radial_identity(ps: &[f64]) -> ExperimentReport {
    let children = ps
        .iter()
        .map(|&p| match energy_identity_report(&exponent(p)) {
            Ok(r) => r,
            Err(err) => check(&format!("p={p}"), false).note(err.to_string()),
        })
        .collect();
    group("radial-identity", children)
}

pub fn zero_energy(ps: &[f64], radii: &[f64]) -> ExperimentReport {
    let mut children = Vec::new();
    for &p in ps {
        for &r in radii {
            children.push(match example_11_energy(&exponent(p), r, 20.0 * r) {
                Ok(rep) => rep.param("R", r),
                Err(err) => check(&format!("p={p} R={r}"), false).note(err.to_string()),
            });
        }
    }
    group("zero-energy", children)
}

pub fn radially_linear(ps: &[f64], count: usize) -> ExperimentReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let children = ps
        .iter()
        .map(|&p| {
            let e = exponent(p);
            let mut worst = f64::INFINITY;
            let mut ok = true;
            for _ in 0..count {
                let segments = rng.random_range(1..5);
                let lam = MatrixProfile::random(&mut rng, segments, 1.0, 0.4);
                match radially_linear_comparison(&IntegrandId::Burkholder, &lam, &e, 16) {
                    Ok(r) => {
                        ok &= r.passed();
                        worst = worst.min(r.metric_or_nan("slack"));
                    }
                    Err(_) => ok = false,
                }
            }
            check(&format!("p={p}"), ok).param("maps", count).metric("min_slack", worst)
        })
        .collect();
    group("radially-linear", children)
}

/// Calibrated perturbations of `ρ = r^(1−2/s)` never raise the energy above π;
/// oversized ones are refused rather than failed.
pub fn local_max(p: f64, s: f64, count: usize) -> ExperimentReport {
    let e = exponent(p);
    let prof = match RadialProfile::new(RhoFamily::power(1.0, 1.0 - 2.0 / s), 1.0, Orientation::Plus) {
        Ok(prof) => prof,
        Err(err) => return check("local-max", false).note(err.to_string()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = f64::NEG_INFINITY;
    let mut asserted = true;
    let mut refused = true;
    for _ in 0..count {
        let bump: Bump = BumpField::random(&mut rng, p, s);
        match local_max_experiment(&prof, s, &bump, &e, PolarGrid::default()) {
            Ok(r) => {
                asserted &= r.verdict == Verdict::Pass;
                worst = worst.max(r.metric_or_nan("energy"));
            }
            Err(_) => asserted = false,
        }
        match local_max_experiment(&prof, s, &bump.scaled(10.0), &e, PolarGrid { n_r: 64, n_theta: 64 }) {
            Ok(r) => refused &= r.verdict == Verdict::NotAsserted,
            Err(_) => refused = false,
        }
    }
    group(
        "local-max",
        vec![
            check("energy-at-most-pi", asserted).param("p", p).param("s", s).metric("max_energy", worst).metric("pi", PI),
            check("oversized-refused", refused),
        ],
    )
}

pub fn euler_lagrange(ode_ps: &[f64]) -> ExperimentReport {
    let mut children = vec![el::burkholder_pde_study(&el::EXPONENTS, 61)];
    children.extend(el::EXPONENTS.iter().map(|&p| el::radial_el_study(p)));
    children.extend(ode_ps.iter().map(|&p| el::ode_reduction_check(p)));
    group("euler-lagrange", children)
}

pub const WINDOW: (f64, f64) = (2.85, 3.05);

/// Seeded zero-mean random field, band-limited to `|k| ≤ band` in each axis.
fn band_limited(n: usize, l: f64, band: i32, seed: u64) -> (beurling::Field, beurling::Field, beurling::Field) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for a in -band..=band {
        for b in -band..=band {
            if a != 0 || b != 0 {
                terms.push((a, b, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
            }
        }
    }
    let w = 2.0 * PI / l;
    let eval = |z: Complex64, which: u8| {
        terms.iter().fold(Complex64::new(0.0, 0.0), |acc, &(a, b, c)| {
            let (k1, k2) = (w * a as f64, w * b as f64);
            let e = c * Complex64::new(0.0, k1 * z.re + k2 * z.im).exp();
            let factor = match which {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 0.5) * Complex64::new(k1, -k2),
                _ => Complex64::new(0.0, 0.5) * Complex64::new(k1, k2),
            };
            acc + factor * e
        })
    };
    let f = |which| beurling::GridField::sample(n, l, |z| eval(z, which)).expect("valid grid");
    (f(0), f(1), f(2))
}

/// Transform checks plus the `L^p` scan. `window` adds the check that the
/// best `p = 4` ratio lands in [`WINDOW`].
pub fn beurling_checks(ps: &[f64], n: usize, window: bool) -> ExperimentReport {
    let l = beurling::DEFAULT_L;
    let mut children = Vec::new();
    match beurling::Plan::new(256) {
        Ok(plan) => {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            let values = (0..256 * 256)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let plancherel = beurling::GridField::new(256, 10.0, values).and_then(|mut f| {
                f.subtract_mean();
                let s = plan.apply(&f)?;
                Ok((s.lp_norm(2.0) / f.lp_norm(2.0) - 1.0).abs())
            });
            let err = plancherel.unwrap_or(f64::INFINITY);
            children.push(check("plancherel", err <= 1e-10).metric("rel_error", err));
            let (f, dz, _) = band_limited(256, 10.0, 12, SEED);
            let identity = plan.d_zbar(&f).and_then(|w| plan.apply(&w)).map(|s| s.l2_distance(&dz) / dz.lp_norm(2.0));
            let err = identity.unwrap_or(f64::INFINITY);
            children.push(check("s-dbar-equals-d", err <= 1e-12).metric("rel_error", err));
        }
        Err(err) => children.push(check("plan", false).note(err.to_string())),
    }
    for &p in ps {
        let r = beurling::scan_report(p, &beurling::default_alphas(p), n, l);
        if window && p == 4.0 {
            let best = r.metric_or_nan("best_ratio");
            children.push(
                check("scan-window", best >= WINDOW.0 && best <= WINDOW.1)
                    .metric("best_ratio", best)
                    .metric("window_lo", WINDOW.0)
                    .metric("window_hi", WINDOW.1),
            );
        }
        children.push(r);
    }
    group("beurling", children)
}

/// The whole battery at one exponent.
pub fn suite(p: f64) -> ExperimentReport {
    let ps = [p];
    let mut r = group(
        "suite",
        vec![
            cross_form(&ps, 10_000),
            burkholder_vnorm(&ps),
            rank_one(p),
            radial_identity(&ps),
            zero_energy(&ps, &[1.0, 2.0]),
            radially_linear(&ps, 50),
            euler_lagrange(&ps),
            beurling_checks(&ps, 512, false),
        ],
    );
    if p == 1.5 || p == 3.0 {
        r.push_child(envelope(&ps));
    }
    if p == 3.0 {
        r.push_child(local_max(3.0, 4.0, 10));
    }
    r.param("p", p)
}
