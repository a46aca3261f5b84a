use bvlab_beurling::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;

fn mode(n: usize, l: f64, a: i32, b: i32) -> Field {
    let w = 2.0 * PI / l;
    GridField::sample(n, l, |z| C::new(0.0, w * (a as f64 * z.re + b as f64 * z.im)).exp()).unwrap()
}

fn max_diff(a: &Field, b: &Field) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Sum of `c e^{i(k1 x + k2 y)}` over low modes, with its exact `∂` and `∂̄`.
fn trig_poly(n: usize, l: f64, terms: &[(i32, i32, C)]) -> (Field, Field, Field) {
    let w = 2.0 * PI / l;
    let eval = |z: C, which: u8| {
        terms.iter().fold(C::new(0.0, 0.0), |acc, &(a, b, c)| {
            let (k1, k2) = (w * a as f64, w * b as f64);
            let e = c * C::new(0.0, k1 * z.re + k2 * z.im).exp();
            let factor = match which {
                0 => C::new(1.0, 0.0),
                1 => C::new(0.0, 0.5) * C::new(k1, -k2),
                _ => C::new(0.0, 0.5) * C::new(k1, k2),
            };
            acc + factor * e
        })
    };
    (
        GridField::sample(n, l, |z| eval(z, 0)).unwrap(),
        GridField::sample(n, l, |z| eval(z, 1)).unwrap(),
        GridField::sample(n, l, |z| eval(z, 2)).unwrap(),
    )
}

#[test]
fn zero_mode_is_annihilated() {
    let f = GridField::sample(64, 3.0, |_| C::new(2.0, -1.0)).unwrap();
    let s = beurling_apply(&f).unwrap();
    assert!(s.values().iter().all(|v| v.norm() < 1e-14));
}

#[test]
fn single_mode_picks_up_symbol() {
    let (n, l) = (64, 5.0);
    let plan = Plan::new(n).unwrap();
    for (a, b) in [(1, 0), (0, 1), (3, -2), (-5, 7), (1, 1)] {
        let f = mode(n, l, a, b);
        let s = plan.apply(&f).unwrap();
        let k = C::new(a as f64, b as f64);
        let m = k.conj() / k;
        assert!((m.norm() - 1.0).abs() < 1e-15);
        let want = GridField::new(n, l, f.values().iter().map(|v| v * m).collect()).unwrap();
        assert!(max_diff(&s, &want) < 1e-12, "({a}, {b})");
        let ss = plan.apply(&s).unwrap();
        let want2 = GridField::new(n, l, f.values().iter().map(|v| v * m * m).collect()).unwrap();
        assert!(max_diff(&ss, &want2) < 1e-12);
        assert!((lp_ratio(&plan, &f, 4.0).unwrap().ratio - 1.0).abs() < 1e-12);
    }
}

#[test]
fn spectral_identity_on_band_limited_fields() {
    let (n, l) = (128, 7.0);
    let plan = Plan::new(n).unwrap();
    let terms = [
        (1, 0, C::new(1.0, 0.5)),
        (-2, 3, C::new(-0.3, 0.2)),
        (5, 5, C::new(0.1, -0.7)),
        (0, -9, C::new(0.25, 0.0)),
        (20, -31, C::new(0.05, 0.05)),
    ];
    let (f, dz, dzb) = trig_poly(n, l, &terms);
    let scale = dz.lp_norm(2.0);
    assert!(plan.d_z(&f).unwrap().l2_distance(&dz) < 1e-12 * scale);
    assert!(plan.d_zbar(&f).unwrap().l2_distance(&dzb) < 1e-12 * scale);
    let s = plan.apply(&plan.d_zbar(&f).unwrap()).unwrap();
    assert!(s.l2_distance(&dz) < 1e-12 * scale);
}

#[test]
fn spectral_identity_on_sampled_disc_map() {
    // f = z inside the unit disc, 1/z̄ outside, smoothed; derivatives taken spectrally.
    let (n, l) = (256, 16.0);
    let plan = Plan::new(n).unwrap();
    let f = GridField::sample(n, l, |z: C| {
        let r = z.norm();
        let chi = 0.5 * (1.0 - ((r - 1.0) / 0.05).tanh());
        z * chi + (1.0 - chi) / z.conj()
    })
    .unwrap();
    let lhs = plan.apply(&plan.d_zbar(&f).unwrap()).unwrap();
    let rhs = plan.d_z(&f).unwrap();
    assert!(lhs.l2_distance(&rhs) < 1e-12 * rhs.lp_norm(2.0));
}

#[test]
fn disc_field_matches_indicator_as_period_grows() {
    let prof = LogProfile::disc(1.0, 0.05).unwrap();
    let err = |n: usize, l: f64| {
        let s = Plan::new(n).unwrap().apply(&prof.omega(n, l).unwrap()).unwrap();
        let mut dz = prof.d_z_field(n, l).unwrap();
        dz.subtract_mean();
        s.l2_distance(&dz) / dz.lp_norm(2.0)
    };
    let (e1, e2, e3) = (err(128, 8.0), err(256, 16.0), err(512, 32.0));
    assert!(e2 < 0.6 * e1 && e3 < 0.6 * e2, "{e1} {e2} {e3}");
    assert!(e3 < 0.05);
}

#[test]
fn plancherel_p2_ratio_is_one() {
    let plan = Plan::new(64).unwrap();
    let prof = LogProfile::for_exponent(4.0, 0.6).unwrap();
    let mut f = prof.omega(64, 20.0).unwrap();
    f.subtract_mean();
    assert!((lp_ratio(&plan, &f, 2.0).unwrap().ratio - 1.0).abs() < 1e-10);
}

#[test]
fn rejects_bad_grids() {
    assert!(matches!(Plan::new(100), Err(BeurlingError::BadSize { .. })));
    assert!(matches!(Plan::new(32), Err(BeurlingError::BadSize { .. })));
    assert!(matches!(GridField::<f64>::zeros(64, 0.0), Err(BeurlingError::BadPeriod(_))));
    let mut v = vec![C::new(0.0, 0.0); 64 * 64];
    v[70] = C::new(f64::NAN, 0.0);
    assert!(matches!(GridField::new(64, 1.0, v), Err(BeurlingError::NonFinite { i: 6, j: 1 })));
    assert!(matches!(GridField::new(64, 1.0, vec![]), Err(BeurlingError::ValueCount { .. })));
    let f = GridField::<f64>::zeros(128, 1.0).unwrap();
    let plan = Plan::new(64).unwrap();
    assert!(matches!(plan.apply(&f), Err(BeurlingError::PlanMismatch { .. })));
    let z = GridField::<f64>::zeros(64, 1.0).unwrap();
    assert!(matches!(lp_ratio(&plan, &z, 3.0), Err(BeurlingError::ZeroDenominator)));
    assert!(lp_ratio(&plan, &mode(64, 1.0, 1, 0), 1.0).is_err());
}

#[test]
fn single_precision_plancherel() {
    let plan = BeurlingPlan::<f32>::new(64).unwrap();
    let f = GridField::<f32>::sample(64, 4.0, |z| {
        num_complex::Complex32::new((3.0 * z.re).sin() * (-z.norm_sqr()).exp(), z.im * (-z.norm_sqr()).exp())
    })
    .unwrap();
    let mut f = f;
    f.subtract_mean();
    let s = plan.apply(&f).unwrap();
    assert!((s.lp_norm(2.0) / f.lp_norm(2.0) - 1.0).abs() < 1e-5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn plancherel_on_random_zero_mean_fields(
        re in prop::collection::vec(-1.0f64..1.0, 64 * 64),
        im in prop::collection::vec(-1.0f64..1.0, 64 * 64),
        l in 0.5f64..50.0,
    ) {
        let mut f = GridField::new(64, l, re.iter().zip(&im).map(|(&a, &b)| C::new(a, b)).collect()).unwrap();
        f.subtract_mean();
        let s = beurling_apply(&f).unwrap();
        prop_assert!((s.lp_norm(2.0) / f.lp_norm(2.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symbol_twice_has_unit_modulus(a in -40i32..40, b in -40i32..40) {
        prop_assume!(a != 0 || b != 0);
        let m = beurling_symbol(C::new(a as f64, b as f64));
        prop_assert!(((m * m).norm() - 1.0).abs() < 1e-15);
        prop_assert!((m * m - (C::new(a as f64, -b as f64) / C::new(a as f64, b as f64)).powi(2)).norm() < 1e-14);
    }
}
