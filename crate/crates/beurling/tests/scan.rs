use bvlab_beurling::*;
use bvlab_kernel::Exponent;

fn check_scan(p: f64) -> Vec<Estimate> {
    let est = norm_lower_bound_scan(p, &default_alphas(p), DEFAULT_N, DEFAULT_L).unwrap();
    let cap = Exponent::new(p).unwrap().burkholder_norm() * (1.0 + ALLOWANCE);
    for w in est.windows(2) {
        assert!(w[1].ratio > w[0].ratio, "ratios must grow as alpha drops: {w:?}");
    }
    for e in &est {
        assert!(e.ratio <= cap, "{e:?}");
        assert!(e.ratio < e.continuum * 1.01, "{e:?}");
        if p >= 2.0 {
            assert!(e.ratio > e.continuum * 0.95, "{e:?}");
        }
    }
    est
}

#[test]
fn scan_p4() {
    let est = check_scan(4.0);
    // alpha = 0.6: the grid value tracks the plane value of this truncated family.
    let at = norm_lower_bound_scan(4.0, &[0.6], DEFAULT_N, DEFAULT_L).unwrap()[0];
    assert!((at.ratio - at.continuum).abs() < 0.05 * at.continuum, "{at:?}");
    assert!(best(&est).unwrap().family_parameter == *default_alphas(4.0).last().unwrap());
}

#[test]
fn scan_p3_and_p15() {
    check_scan(3.0);
    check_scan(1.5);
}

#[test]
fn minus_orientation_gap_closes_with_period() {
    // Below p = 2 the transform's tail decays slowly, so the torus cuts off
    // mass that the plane keeps; the gap shrinks as the period grows.
    let gap = |n: usize, l: f64| {
        let e = norm_lower_bound_scan(1.5, &[-0.2], n, l).unwrap()[0];
        e.continuum - e.ratio
    };
    let (g1, g2) = (gap(256, 10.0), gap(1024, 40.0));
    assert!(g2 > 0.0 && g2 < 0.6 * g1, "{g1} {g2}");
}

#[test]
fn reproducible_bit_for_bit() {
    let a = norm_lower_bound_scan(3.0, &[0.5], 256, 20.0).unwrap();
    let b = norm_lower_bound_scan(3.0, &[0.5], 256, 20.0).unwrap();
    assert_eq!(a[0].ratio.to_bits(), b[0].ratio.to_bits());
}

#[test]
fn alpha_window_enforced() {
    assert!(matches!(
        norm_lower_bound_scan(4.0, &[0.5], 64, 10.0),
        Err(BeurlingError::AlphaOutOfRange { .. })
    ));
    assert!(norm_lower_bound_scan(1.5, &[-0.4], 64, 10.0).is_err());
    assert!(norm_lower_bound_scan(4.0, &[1.0], 64, 10.0).is_err());
    let r = scan_report(4.0, &[0.4], 64, 10.0);
    assert_eq!(r.precondition.as_deref(), Some("alpha in (1 - 2/p, 1)"));
}

#[test]
fn report_and_csv() {
    let r = scan_report(4.0, &[0.7, 0.6], 256, 20.0);
    assert!(r.passed(), "{}", r.to_canonical_json());
    assert!(r.metric_or_nan("best_ratio_half_n").is_finite());
    assert_eq!(r.metric_or_nan("best_alpha"), 0.6);
    let est = norm_lower_bound_scan(4.0, &[0.7], 64, 10.0).unwrap();
    let mut buf = Vec::new();
    write_scan_csv(&est, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("alpha,ratio,n,L,continuum\n0.7,"));
}
