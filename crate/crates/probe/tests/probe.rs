use bvlab_kernel::*;
use bvlab_probe::*;
use num_complex::Complex64 as C;

fn e(p: f64) -> Exponent64 {
    Exponent::new(p).unwrap()
}

fn m(x: f64, y: f64) -> Gradient {
    PlanarGradient::from_moduli(x, y)
}

#[test]
fn burkholder_p4_restriction_is_flat_at_zero() {
    // (1-2t)(1+2t)^3 for t > 0 and 1+4t for t < 0: f''(0) = 0, and the
    // central difference equals -16h - 16h^2 exactly.
    let h = 1e-3;
    let d = second_difference(&IntegrandId::Burkholder, &e(4.0), &m(1.0, 0.0), &m(1.0, 1.0), 0.0, h);
    assert!((d - (-16.0 * h - 16.0 * h * h)).abs() < 1e-7, "{d}");
    assert!(d.abs() < 20.0 * h);
}

#[test]
fn burkholder_p4_curvature_at_point_one() {
    let exact = -24.0 * 1.2f64.powi(2) + 24.0 * 0.8 * 1.2;
    assert!((exact + 11.52).abs() < 1e-12);
    let d = second_difference(&IntegrandId::Burkholder, &e(4.0), &m(1.0, 0.0), &m(1.0, 1.0), 0.1, 1e-4);
    assert!((d - exact).abs() < 1e-5, "{d}");
}

#[test]
fn beurling_p4_is_convex_at_identity() {
    // (1+t)^4 - 81 t^4 has second derivative 12 at 0
    let d = second_difference(&IntegrandId::BeurlingM(3.0), &e(4.0), &m(1.0, 0.0), &m(1.0, 1.0), 0.0, 1e-4);
    assert!((d - 12.0).abs() < 1e-5, "{d}");
}

#[test]
fn burkholder_is_concave_on_sample() {
    let cfg = Config::standard(DEFAULT_BASES);
    let r = probe_rank_one_concavity(&IntegrandId::Burkholder, &e(3.0), &cfg).unwrap();
    assert!(!r.is_violation(), "{r:?}");
    let r = probe_rank_one_concavity(&IntegrandId::BurkholderM(2.0), &e(3.0), &cfg).unwrap();
    assert!(!r.is_violation());
}

#[test]
fn burkholder_concave_for_all_listed_exponents() {
    let cfg = Config::standard(5);
    assert!(cfg.triples() >= 100_000);
    for p in [1.2, 1.5, 2.0, 3.0, 4.0, 8.0] {
        let r = probe_rank_one_concavity(&IntegrandId::Burkholder, &e(p), &cfg).unwrap();
        assert!(!r.is_violation(), "p={p}: {r:?}");
    }
}

#[test]
fn burkholder_m_below_threshold_has_a_witness() {
    let cfg = Config::standard(DEFAULT_BASES);
    for (p, mm) in [(3.0, 1.9), (3.0, 1.95), (1.5, 1.95)] {
        let ex = e(p);
        let id = IntegrandId::BurkholderM(mm);
        let r = probe_rank_one_concavity(&id, &ex, &cfg).unwrap();
        let w = r.witness().unwrap_or_else(|| panic!("p={p} M={mm}: no witness"));
        let again = second_difference(&id, &ex, &w.base, &w.direction, w.t, cfg.h);
        assert_eq!(again, w.second_difference);
        assert!(again > w.threshold);
    }
}

#[test]
fn beurling_fails_near_identity_for_large_p() {
    let cfg = Config::standard(3).with_bases(vec![m(1.0, 0.0)]);
    let r = probe_rank_one_concavity(&IntegrandId::BeurlingM(3.0), &e(4.0), &cfg).unwrap();
    assert!(r.is_violation());
}

#[test]
fn beurling_fails_near_anticonformal_for_small_p() {
    let ex = e(1.5);
    let cfg = Config::standard(3).with_bases(vec![m(0.0, 1.0)]);
    let r = probe_rank_one_concavity(&IntegrandId::BeurlingM(ex.burkholder_norm()), &ex, &cfg).unwrap();
    assert!(r.is_violation());
}

#[test]
fn aubert_threshold_is_bracketed() {
    let mt = 2.0 + 3f64.sqrt();
    let cfg = Config::standard(DEFAULT_BASES);
    let grid: Vec<f64> = (0..=20).map(|k| 3.60 + 0.01 * k as f64).collect();
    let res = probe_aubert_threshold(&grid, &cfg).unwrap();
    let (bad, good) = transition(&res).expect("single transition");
    assert!(bad < mt && good > mt, "bracket [{bad}, {good}]");
    assert!(mt - bad <= 0.02 && good - mt <= 0.02);
    let at = probe_aubert_threshold(&[3.6, mt, 3.8], &cfg).unwrap();
    assert!(at[0].1.is_violation());
    assert!(!at[1].1.is_violation());
    assert!(!at[2].1.is_violation());
    assert_eq!(probe_aubert_threshold(&[3.8, 3.6], &cfg).unwrap_err(), ProbeError::UnsortedGrid);
}

/// Exact second derivative of the Aubert quartic along `A + tX`.
fn aubert_exact(mm: f64, a: &Gradient, x: &Gradient, t: f64) -> f64 {
    // |u + t w|^2 = |u|^2 + 2t Re(u conj w) + t^2 |w|^2
    let quad = |u: C, w: C| (u.norm_sqr(), 2.0 * (u * w.conj()).re, w.norm_sqr());
    let (a0, a1, a2) = quad(a.xi, x.xi);
    let (b0, b1, b2) = quad(a.zeta, x.zeta);
    let at = |c: (f64, f64, f64)| (c.0 + c.1 * t + c.2 * t * t, c.1 + 2.0 * c.2 * t, 2.0 * c.2);
    let (fa, da, dda) = at((a0, a1, a2));
    let (fb, db, ddb) = at((b0, b1, b2));
    let m2 = mm * mm;
    let (g, dg, ddg) = (fa - m2 * fb, da - m2 * db, dda - m2 * ddb);
    let (s, ds, dds) = (fa + fb, da + db, dda + ddb);
    ddg * s + 2.0 * dg * ds + g * dds
}

#[test]
fn finite_differences_converge_at_second_order() {
    let a = PlanarGradient::new(C::new(0.7, 0.2), C::new(-0.1, 0.4));
    let x = PlanarGradient::new(C::from_polar(1.0, 0.3), C::from_polar(1.0, 2.1));
    let id = IntegrandId::Aubert(2.5);
    let ex = e(4.0);
    let exact = aubert_exact(2.5, &a, &x, 0.15);
    let err = |h: f64| (second_difference(&id, &ex, &a, &x, 0.15, h) - exact).abs();
    let (e1, e2) = (err(1e-2), err(5e-3));
    assert!(e1 > 0.0 && (e1 / e2 - 4.0).abs() < 0.1, "{e1} {e2}");
}

#[test]
fn verdicts_invariant_under_shared_phases() {
    let ex = e(3.0);
    let id = IntegrandId::BurkholderM(1.9);
    let base = Config::standard(9);
    let rotated = base.clone().with_bases(
        base.bases.iter().map(|b| b.rotate(0.7, -1.3)).collect(),
    );
    let r0 = probe_rank_one_concavity(&id, &ex, &base).unwrap();
    let r1 = probe_rank_one_concavity(&id, &ex, &rotated).unwrap();
    assert_eq!(r0.is_violation(), r1.is_violation());
    // matching directions give matching second differences
    let a = base.bases[3];
    let x = base.direction(5, 11);
    for t in [-0.4, 0.0, 0.3] {
        let d0 = second_difference(&id, &ex, &a, &x, t, 1e-3);
        let d1 = second_difference(&id, &ex, &a.rotate(0.7, -1.3), &x.rotate(0.7, -1.3), t, 1e-3);
        assert!((d0 - d1).abs() < 1e-6 * d0.abs().max(1.0));
    }
}

#[test]
fn config_validation() {
    let mut cfg = Config::standard(3);
    cfg.h = 0.1;
    assert_eq!(cfg.validate(), Err(ProbeError::StepOutOfRange(0.1)));
    cfg.h = 1e-3;
    cfg.bases.clear();
    assert_eq!(cfg.validate(), Err(ProbeError::EmptySample));
}

#[test]
fn witness_is_deterministic() {
    let cfg = Config::standard(17);
    let id = IntegrandId::BeurlingM(3.0);
    let a = probe_rank_one_concavity(&id, &e(4.0), &cfg).unwrap();
    let b = probe_rank_one_concavity(&id, &e(4.0), &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn single_precision_probe_runs() {
    let cfg = ProbeConfig::<f32>::standard(3);
    let ex = Exponent::new(4.0_f32).unwrap();
    let r = probe_rank_one_concavity(&IntegrandId::BeurlingM(3.0_f32), &ex, &cfg).unwrap();
    assert!(r.is_violation());
}
