use std::f64::consts::PI;

use bvlab_kernel::{Complex, Exponent, IntegrandId, PlanarGradient, C64};
use bvlab_radial::*;
use bvlab_report::Verdict;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exp(p: f64) -> Exponent<f64> {
    Exponent::new(p).unwrap()
}

/// `(f_z, f_zbar)` from central differences of `f`.
fn wirtinger(f: impl Fn(C64) -> C64, z: C64, h: f64) -> (C64, C64) {
    let fx = (f(z + h) - f(z - h)) / (2.0 * h);
    let i = Complex::new(0.0, 1.0);
    let fy = (f(z + i * h) - f(z - i * h)) / (2.0 * h);
    ((fx - i * fy) * 0.5, (fx + i * fy) * 0.5)
}

fn stretching(prof: &Profile) -> impl Fn(C64) -> C64 + '_ {
    move |z: C64| {
        let r = z.norm();
        let unit = match prof.orientation {
            Orientation::Plus => z / r,
            Orientation::Minus => z.conj() / r,
        };
        unit * prof.rho.rho(r)
    }
}

/// Independent check: `r = R u^6` removes the power singularity at 0,
/// then composite Simpson on `[0, 1]` per breakpoint-free piece.
fn simpson_energy(id: &IntegrandId<f64>, prof: &Profile, e: &Exponent<f64>) -> f64 {
    let big_r = prof.radius;
    let mut cuts = vec![0.0];
    cuts.extend(prof.rho.breakpoints().into_iter().filter(|&b| b < big_r).map(|b| (b / big_r).powf(1.0 / 6.0)));
    cuts.push(1.0);
    let f = |u: f64| {
        let r = big_r * u.powi(6);
        if r == 0.0 {
            return 0.0;
        }
        let g = radial_derivatives(prof, r).unwrap();
        2.0 * PI * r * id.eval(e, &g) * big_r * 6.0 * u.powi(5)
    };
    let n = 20_000;
    cuts.windows(2)
        .map(|w| {
            let h = (w[1] - w[0]) / n as f64;
            let mut s = f(w[0] * (1.0 + 1e-12)) + f(w[1] * (1.0 - 1e-12));
            for k in 1..n {
                s += f(w[0] + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        })
        .sum()
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (_, rho, radius) in profile_family() {
        for orientation in [Orientation::Plus, Orientation::Minus] {
            let prof = RadialProfile::new(rho.clone(), radius, orientation).unwrap();
            for _ in 0..20 {
                let z = C64::from_polar(rng.random_range(0.05..0.95) * radius, rng.random_range(0.0..std::f64::consts::TAU));
                if prof.rho.breakpoints().iter().any(|b| (z.norm() - b).abs() < 1e-4) {
                    continue;
                }
                let g = radial_derivatives_at(&prof, z).unwrap();
                let (fz, fzb) = wirtinger(stretching(&prof), z, 1e-6);
                assert!((g.xi - fz).norm() < 1e-6 * (1.0 + fz.norm()), "{rho:?} {z}");
                assert!((g.zeta - fzb).norm() < 1e-6 * (1.0 + fzb.norm()), "{rho:?} {z}");
            }
        }
    }
}

#[test]
fn identity_has_unit_gradient() {
    let prof = RadialProfile::new(RhoFamily::identity(), 2.0, Orientation::Plus).unwrap();
    for r in [1e-3, 0.5, 2.0] {
        let g = radial_derivatives(&prof, r).unwrap();
        assert_eq!(g.moduli(), (1.0, 0.0));
    }
    assert!(radial_derivatives(&prof, 0.0).is_err());
    assert!(radial_derivatives(&prof, 2.5).is_err());
}

#[test]
fn power_profile_moduli() {
    for alpha in [-0.5_f64, 0.3, 0.9] {
        let prof = RadialProfile::new(RhoFamily::power(1.0, alpha), 1.0, Orientation::Plus).unwrap();
        for r in [0.1_f64, 0.7] {
            let (x, y) = radial_derivatives(&prof, r).unwrap().moduli();
            let scale = r.powf(alpha - 1.0);
            assert!((2.0 * x - (alpha + 1.0) * scale).abs() < 1e-12);
            assert!((2.0 * y - (1.0 - alpha) * scale).abs() < 1e-12);
        }
    }
}

#[test]
fn reflection_exterior_map_is_the_plus_stretching_of_r_inverse() {
    // R²/z̄ at R = 1 is ρ(r) = 1/r with the plus orientation
    let prof = RadialProfile::new(RhoFamily::power(1.0, -1.0), 3.0, Orientation::Plus).unwrap();
    let z = C64::from_polar(1.7, 0.4);
    let (fz, fzb) = wirtinger(|z| 1.0 / z.conj(), z, 1e-6);
    let g = radial_derivatives_at(&prof, z).unwrap();
    assert!((g.xi - fz).norm() < 1e-8 && (g.zeta - fzb).norm() < 1e-8);
    assert!(g.xi.norm() < 1e-14 && g.zeta.norm() > 0.3);
    // with the minus orientation the same ρ is 1/z, which is holomorphic
    let minus = RadialProfile::new(RhoFamily::power(1.0, -1.0), 3.0, Orientation::Minus).unwrap();
    let g = radial_derivatives_at(&minus, z).unwrap();
    assert!(g.zeta.norm() < 1e-14);
}

#[test]
fn closed_form_examples() {
    let ident = |radius| RadialProfile::new(RhoFamily::identity(), radius, Orientation::Plus).unwrap();
    assert!((closed_form_energy(&ident(1.0), &exp(3.0)).unwrap() - PI).abs() < 1e-14);
    assert!((closed_form_energy(&ident(2.0), &exp(3.0)).unwrap() - 4.0 * PI).abs() < 1e-13);
    let minus = RadialProfile::new(RhoFamily::identity(), 1.0, Orientation::Minus).unwrap();
    assert!((closed_form_energy(&minus, &exp(1.5)).unwrap() + 2.0 * PI).abs() < 1e-13);
    assert!(matches!(
        closed_form_energy(&minus, &exp(3.0)),
        Err(RadialError::OrientationMismatch { .. })
    ));
}

#[test]
fn quadrature_examples() {
    let cases = [
        (RhoFamily::identity(), 1.0, Orientation::Plus, 3.0, PI),
        (RhoFamily::power(1.0, 0.5), 1.0, Orientation::Plus, 3.0, PI),
        (RhoFamily::identity(), 2.0, Orientation::Plus, 3.0, 4.0 * PI),
        (RhoFamily::identity(), 1.0, Orientation::Minus, 1.5, -2.0 * PI),
    ];
    for (rho, radius, o, p, expected) in cases {
        let prof = RadialProfile::new(rho, radius, o).unwrap();
        let q = energy_quadrature(&IntegrandId::Burkholder, &prof, &exp(p)).unwrap();
        assert!((q.value - expected).abs() < 1e-9 * expected.abs(), "{}: {}", p, q.value);
    }
}

#[test]
fn quadrature_matches_independent_simpson_rule() {
    for p in [1.5, 3.0] {
        let e = exp(p);
        let o = Orientation::for_exponent(p);
        for (name, rho, radius) in profile_family() {
            let prof = RadialProfile::new(rho, radius, o).unwrap();
            let q = energy_quadrature(&IntegrandId::Burkholder, &prof, &e).unwrap().value;
            let s = simpson_energy(&IntegrandId::Burkholder, &prof, &e);
            assert!((q - s).abs() < 1e-7 * (1.0 + s.abs()), "{name} p={p}: {q} vs {s}");
        }
    }
}

#[test]
fn energy_identity_over_the_family() {
    for p in [1.5, 2.0, 3.0, 4.0] {
        let r = energy_identity_report(&exp(p)).unwrap();
        assert!(r.passed(), "p={p}: {}", r.metric_or_nan("max_scaled_error"));
        assert_eq!(r.metrics.len(), 12 * 3 + 1);
    }
}

#[test]
fn inadmissible_profiles_are_rejected() {
    let e = exp(3.0);
    let steep = RadialProfile::new(RhoFamily::power(1.0, 1.5), 1.0, Orientation::Plus).unwrap();
    assert!(matches!(
        energy_quadrature(&IntegrandId::Burkholder, &steep, &e),
        Err(RadialError::NotAdmissible(_))
    ));
    let flat = RadialProfile::new(RhoFamily::power(1.0, 0.3), 1.0, Orientation::Plus).unwrap();
    assert!(flat.check_energy_admissible(3.0).is_err());
    assert!(flat.check_energy_admissible(2.5).is_ok());
    assert!(RadialProfile::new(RhoFamily::identity(), -1.0, Orientation::Plus).is_err());
    let broken = RhoFamily::PiecewisePower {
        pieces: vec![
            PowerPiece { start: 0.0, c: 1.0, alpha: 1.0 },
            PowerPiece { start: 0.5, c: 2.0, alpha: 1.0 },
        ],
    };
    assert!(RadialProfile::new(broken, 1.0, Orientation::Plus).is_err());
}

#[test]
fn profile_json_round_trip() {
    for (_, rho, radius) in profile_family() {
        let prof = RadialProfile::new(rho, radius, Orientation::Minus).unwrap();
        let text = serde_json::to_string(&prof).unwrap();
        assert!(text.contains("\"family\""));
        assert_eq!(Profile::from_json(&text).unwrap(), prof);
    }
    let text = r#"{"rho":{"family":"power","c":1.0,"alpha":0.5},"radius":1.0,"orientation":"plus"}"#;
    assert_eq!(Profile::from_json(text).unwrap().rho, RhoFamily::power(1.0, 0.5));
}

#[test]
fn radially_linear_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lam = MatrixProfile::random(&mut rng, 4, 1.0, 0.5);
    let f = |x: [f64; 2]| {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let (m, _) = lam.eval(r);
        [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
    };
    for (r, t) in [(0.3, 0.2), (0.6, 2.0), (0.9, 4.0)] {
        let x = [r * f64::cos(t), r * f64::sin(t)];
        let h = 1e-6;
        let mut d = [[0.0; 2]; 2];
        for j in 0..2 {
            let (mut a, mut b) = (x, x);
            a[j] += h;
            b[j] -= h;
            let (fa, fb) = (f(a), f(b));
            for i in 0..2 {
                d[i][j] = (fa[i] - fb[i]) / (2.0 * h);
            }
        }
        let g = radially_linear_gradient(&lam, r, t);
        let expected = PlanarGradient::from_matrix(d);
        assert!((g.xi - expected.xi).norm() < 1e-7 && (g.zeta - expected.zeta).norm() < 1e-7);
    }
}

#[test]
fn constant_lambda_gives_equality() {
    let m = [[1.2, -0.3], [0.4, 0.7]];
    let lam = MatrixProfile::constant(m, 1.5);
    let r = radially_linear_comparison(&IntegrandId::Burkholder, &lam, &exp(3.0), 8).unwrap();
    assert!(r.passed());
    assert!(r.metric_or_nan("slack").abs() < 1e-12 * r.metric_or_nan("rhs").abs());
}

#[test]
fn shrinking_diagonal_has_positive_slack() {
    let lam = MatrixProfile::new(vec![0.0, 1.0], vec![[[1.0, 0.0], [0.0, 1.0]], [[1.0, 0.0], [0.0, 0.7]]]).unwrap();
    let r = radially_linear_comparison(&IntegrandId::Burkholder, &lam, &exp(3.0), 16).unwrap();
    assert!(r.passed());
    assert!(r.metric_or_nan("slack") > 1e-4, "{}", r.metric_or_nan("slack"));
}

#[test]
fn random_radially_linear_maps_never_beat_the_linear_extension() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [1.5, 3.0] {
        let e = exp(p);
        for _ in 0..50 {
            let segments = rng.random_range(1..5);
            let lam = MatrixProfile::random(&mut rng, segments, 1.0, 0.4);
            let r = radially_linear_comparison(&IntegrandId::Burkholder, &lam, &e, 16).unwrap();
            assert!(r.passed(), "p={p}: slack {}", r.metric_or_nan("slack"));
        }
    }
}

#[test]
fn disc_map_total_vanishes() {
    for p in [1.5, 2.0, 3.0, 4.0] {
        for big_r in [1.0, 2.0] {
            let r = example_11_energy(&exp(p), big_r, 20.0 * big_r).unwrap();
            assert!(r.passed(), "p={p} R={big_r}: {}", r.metric_or_nan("relative_total"));
            let inner = r.metric_or_nan("inner");
            assert!((inner - PI * big_r * big_r).abs() < 1e-9 * inner);
        }
    }
    let r = example_11_energy(&exp(3.0), 1.0, 10.0).unwrap();
    assert!((r.metric_or_nan("outer") + r.metric_or_nan("tail") + PI).abs() < 1e-9);
    // with the p*-1 coefficient the cancellation is lost below p = 2
    let r = example_11_energy(&exp(1.5), 1.0, 10.0).unwrap();
    assert!((r.metric_or_nan("total_with_p_star_coefficient") + 3.0 * PI).abs() < 1e-7);
}

#[test]
fn disc_map_outer_part_converges_as_the_cutoff_grows() {
    let mut prev = f64::INFINITY;
    for r_outer in [2.0, 8.0, 32.0] {
        let r = example_11_energy(&exp(3.0), 1.0, r_outer).unwrap();
        let missing = r.metric_or_nan("tail").abs();
        assert!(missing < prev);
        assert!(r.passed());
        prev = missing;
    }
}

#[test]
fn bump_derivatives_match_finite_differences() {
    let bump = BumpField {
        center: C64::new(0.1, -0.2),
        radius: 0.35,
        a: C64::new(0.4, -0.7),
        b: C64::new(-0.2, 0.9),
        scale: 1.3,
    };
    for z in [C64::new(0.15, -0.1), C64::new(0.0, -0.3), C64::new(0.3, -0.25)] {
        let (_, ez, ezb) = bump.eval(z);
        let (fz, fzb) = wirtinger(|z| bump.eval(z).0, z, 1e-6);
        assert!((ez - fz).norm() < 1e-6 && (ezb - fzb).norm() < 1e-6, "{z}");
    }
    assert_eq!(bump.eval(C64::new(0.9, 0.0)).0, C64::new(0.0, 0.0));
}

#[test]
fn unperturbed_identity_energy_is_pi() {
    let prof = RadialProfile::new(RhoFamily::identity(), 1.0, Orientation::Plus).unwrap();
    let r = local_max_experiment(&prof, 4.0, &BumpField::zero(), &exp(3.0), PolarGrid { n_r: 64, n_theta: 64 }).unwrap();
    assert!((r.metric_or_nan("energy") - PI).abs() < 1e-12);
    assert!(r.passed());
}

#[test]
fn local_maximum_holds_for_calibrated_perturbations() {
    let (p, s) = (3.0, 4.0);
    let e = exp(p);
    let prof = RadialProfile::new(RhoFamily::power(1.0, 1.0 - 2.0 / s), 1.0, Orientation::Plus).unwrap();
    let base = local_max_experiment(&prof, s, &BumpField::zero(), &e, PolarGrid::default()).unwrap();
    assert!((base.metric_or_nan("energy") - PI).abs() < 1e-9, "{}", base.metric_or_nan("energy"));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let bump = Bump::random(&mut rng, p, s);
        assert!((bump.smallness(p) - MARGIN * (1.0 - p / s)).abs() < 1e-12);
        let r = local_max_experiment(&prof, s, &bump, &e, PolarGrid::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.metrics);
        let big = local_max_experiment(&prof, s, &bump.scaled(10.0), &e, PolarGrid::default()).unwrap();
        assert_eq!(big.verdict, Verdict::NotAsserted);
        assert!(big.precondition.as_deref().unwrap().contains("smallness"));
    }
}

#[test]
fn local_maximum_refuses_inadmissible_profiles() {
    let prof = RadialProfile::new(RhoFamily::power(1.0, 0.3), 1.0, Orientation::Plus).unwrap();
    let r = local_max_experiment(&prof, 4.0, &BumpField::zero(), &exp(3.0), PolarGrid { n_r: 32, n_theta: 32 }).unwrap();
    assert_eq!(r.verdict, Verdict::NotAsserted);
    assert!(local_max_experiment(&prof, 4.0, &BumpField::zero(), &exp(3.0), PolarGrid { n_r: 20, n_theta: 32 }).is_err());
}

#[test]
fn single_precision_energy() {
    let e = Exponent::new(3.0_f32).unwrap();
    let prof = RadialProfile::new(RhoFamily::power(1.0_f32, 0.8), 1.0, Orientation::Plus).unwrap();
    let q = energy_quadrature(&IntegrandId::Burkholder, &prof, &e).unwrap();
    assert!((q.value - std::f32::consts::PI).abs() < 1e-4, "{}", q.value);
}
