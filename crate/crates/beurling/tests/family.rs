use bvlab_beurling::*;
use bvlab_radial::Orientation;
use num_complex::Complex64 as C;

fn map(prof: &LogProfile<f64>, z: C) -> C {
    let r = z.norm();
    let rho = r * prof.log_q(r.ln()).exp();
    match prof.orientation {
        Orientation::Plus => z * (rho / r),
        Orientation::Minus => z.conj() * (rho / r),
    }
}

#[test]
fn derivatives_match_finite_differences_of_the_map() {
    let h = 1e-6;
    for orientation in [Orientation::Plus, Orientation::Minus] {
        let prof = LogProfile::new(0.55, 0.1, 5.0, 0.1, orientation).unwrap();
        for z in [C::new(0.05, 0.02), C::new(0.3, -0.4), C::new(-2.0, 1.5), C::new(4.0, 3.5), C::new(-9.0, -0.5)] {
            let fx = (map(&prof, z + h) - map(&prof, z - h)) / (2.0 * h);
            let fy = (map(&prof, z + C::new(0.0, h)) - map(&prof, z - C::new(0.0, h))) / (2.0 * h);
            let dz = 0.5 * (fx - C::i() * fy);
            let dzb = 0.5 * (fx + C::i() * fy);
            let (a, b) = prof.derivatives(z);
            let s = a.norm() + b.norm();
            assert!((a - dz).norm() < 1e-7 * s.max(1.0), "{orientation:?} {z} {a} {dz}");
            assert!((b - dzb).norm() < 1e-7 * s.max(1.0), "{orientation:?} {z} {b} {dzb}");
        }
    }
}

#[test]
fn log_q_derivative_is_slope_minus_one() {
    let prof = LogProfile::<f64>::new(0.3, 0.2, 3.0, 0.15, Orientation::Plus).unwrap();
    for t in [-5.0, -1.6, 0.0, 1.1, 4.0] {
        let h = 1e-5;
        let d = (prof.log_q(t + h) - prof.log_q(t - h)) / (2.0 * h);
        assert!((d - (prof.slope(t) - 1.0)).abs() < 1e-8);
    }
    assert!((prof.slope(-30.0) - 1.0).abs() < 1e-12);
    assert!((prof.slope(0.5 * (0.2_f64.ln() + 3.0_f64.ln())) - 0.3).abs() < 1e-3);
    assert!((prof.slope(30.0) + 1.0).abs() < 1e-12);
}

fn simpson_ratio(prof: &LogProfile<f64>, p: f64) -> f64 {
    let (lo, hi, m) = (-40.0, 60.0, 200_000);
    let h = (hi - lo) / m as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for k in 0..=m {
        let t = lo + k as f64 * h;
        let w = if k == 0 || k == m { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        let (u, v) = prof.moduli(t.exp());
        a += w * u.powf(p) * (2.0 * t).exp();
        b += w * v.powf(p) * (2.0 * t).exp();
    }
    (a / b).powf(1.0 / p)
}

#[test]
fn continuum_ratio_matches_simpson() {
    for (p, alpha) in [(4.0, 0.6), (3.0, 0.4), (1.5, -0.2), (2.0, 0.5)] {
        let prof = LogProfile::for_exponent(p, alpha).unwrap();
        let got = prof.continuum_ratio(p).unwrap();
        let want = simpson_ratio(&prof, p);
        assert!((got - want).abs() < 1e-8 * want, "{p} {alpha} {got} {want}");
        // The plus map has |f_z|/|f_z̄| ≤ (1+α)/(1−α) everywhere. The minus map is
        // holomorphic far out, so no pointwise bound holds there.
        if prof.orientation == Orientation::Plus {
            assert!(got < (1.0 + alpha) / (1.0 - alpha));
        }
    }
    // S is an isometry of L², so the plane ratio is one at p = 2.
    let prof = LogProfile::for_exponent(2.0, 0.5).unwrap();
    assert!((prof.continuum_ratio(2.0).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn disc_profile_is_smoothed_indicator() {
    let prof = LogProfile::<f64>::disc(1.0, 0.02).unwrap();
    let (u, v) = prof.moduli(0.3);
    assert!((u - 1.0).abs() < 1e-6 && v < 1e-6);
    let (u, v) = prof.moduli(3.0);
    assert!(u < 1e-6 && (v - 1.0 / 9.0).abs() < 1e-3);
}

#[test]
fn rejects_bad_profiles() {
    assert!(LogProfile::new(1.5, 0.1, 5.0, 0.1, Orientation::Plus).is_err());
    assert!(LogProfile::new(0.5, 5.0, 0.1, 0.1, Orientation::Plus).is_err());
    assert!(LogProfile::new(0.5, 0.1, 5.0, 0.0, Orientation::Plus).is_err());
}
