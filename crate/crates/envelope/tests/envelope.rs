use bvlab_envelope::hull::upper_hull_in_place;
use bvlab_envelope::{
    closed_form_study, compute_envelope, compute_envelope_with, zigzag_concavify_step,
    zigzag_step_with, Boundary, EnvelopeConfig, EnvelopeError, GridShape, HomogeneousProfile,
    Method, ModuliGrid,
};
use bvlab_kernel::{Exponent, IntegrandId};

fn beurling(p: f64) -> (IntegrandId<f64>, Exponent<f64>) {
    let e = Exponent::new(p).unwrap();
    (IntegrandId::BeurlingM(e.burkholder_norm()), e)
}

fn closed(e: &Exponent<f64>) -> impl Fn(f64, f64) -> f64 + '_ {
    move |x, y| IntegrandId::EnvelopeClosedForm.eval_moduli(e, x, y)
}

/// Plain relaxation `g <- hull(max(g, T g))` on the explicit node set
/// `{σ_i} ∪ {1/σ_i}`; slow but independent of the policy iteration.
fn relaxed_profile(p: f64, n: usize) -> Vec<f64> {
    let m = n as f64;
    let mut tau: Vec<f64> = (0..=2 * n).map(|i| i as f64 / m - 1.0).collect();
    for i in 0..=2 * n {
        if i != n && i != 0 && i != 2 * n {
            tau.push(m / (i as f64 - m));
        }
    }
    tau.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let find = |t: f64| tau.iter().position(|&s| (s - t).abs() < 1e-9 * t.abs().max(1.0));
    let inv: Vec<Option<usize>> =
        tau.iter().map(|&t| if t == 0.0 { None } else { find(1.0 / t) }).collect();
    let ms = Exponent::new(p).unwrap().burkholder_norm();
    let mut g: Vec<f64> = tau
        .iter()
        .map(|&t| {
            let (x, y) = ((1.0 + t).abs() / 2.0, (1.0 - t).abs() / 2.0);
            x.powf(p) - ms.powf(p) * y.powf(p)
        })
        .collect();
    let mut stack = Vec::new();
    for _ in 0..400_000 {
        let mut h: Vec<f64> = (0..g.len())
            .map(|k| match inv[k] {
                Some(j) => g[k].max(tau[k].abs().powf(p) * g[j]),
                None => g[k],
            })
            .collect();
        upper_hull_in_place(&tau, &mut h, &mut stack);
        let change = h.iter().zip(&g).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        g = h;
        if change < 1e-16 {
            break;
        }
    }
    tau.iter().zip(g).filter(|(t, _)| t.abs() <= 1.0 + 1e-12).map(|(_, v)| v).collect()
}

#[test]
fn policy_iteration_reproduces_relaxation_fixed_point() {
    for p in [3.0, 1.5] {
        let (id, e) = beurling(p);
        let prof = HomogeneousProfile::solve(&id, &e, 16).unwrap();
        let oracle = relaxed_profile(p, 16);
        assert_eq!(oracle.len(), prof.values().len());
        for (a, b) in prof.values().iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8, "p={p}: {a} vs {b}");
        }
    }
}

#[test]
fn profile_solves_its_fixed_point_equation() {
    for p in [1.2, 1.5, 3.0, 4.0] {
        let (id, e) = beurling(p);
        let prof = HomogeneousProfile::solve(&id, &e, 1024).unwrap();
        assert!(prof.residual() < 1e-12, "p={p}: {}", prof.residual());
        assert!(prof.values().iter().zip(prof.obstacle()).all(|(g, g0)| g >= g0));
    }
}

#[test]
fn profile_approaches_closed_form_on_the_unit_segment() {
    for p in [1.5, 3.0] {
        let (id, e) = beurling(p);
        let f = closed(&e);
        let mut prev = f64::INFINITY;
        for n in [256, 2048, 16384] {
            let prof = HomogeneousProfile::solve(&id, &e, n).unwrap();
            let err = (0..=2 * n)
                .map(|i| {
                    let t = prof.sigma(i);
                    (prof.values()[i] - f((1.0 + t) / 2.0, (1.0 - t) / 2.0)).abs()
                })
                .fold(0.0, f64::max);
            assert!(err < prev, "p={p} n={n}: {err} !< {prev}");
            prev = err;
        }
        assert!(prev < 1e-4, "p={p}: {prev}");
    }
}

#[test]
fn f2_is_a_fixed_point_in_both_modes() {
    let (id, e) = beurling(2.0);
    let g = ModuliGrid::sample_integrand(GridShape::square(41, 2.0).unwrap(), &id, &e).unwrap();
    for b in [Boundary::Folded, Boundary::Windowed] {
        let s = zigzag_step_with(&g, b).unwrap();
        assert!(s.sup_distance(&g) < 1e-12, "{b:?}");
    }
}

#[test]
fn burkholder_is_a_fixed_point_up_to_grid_error() {
    let e = Exponent::new(3.0).unwrap();
    let g = ModuliGrid::sample_integrand(
        GridShape::square(65, 2.0).unwrap(),
        &IntegrandId::Burkholder,
        &e,
    )
    .unwrap();
    let s = zigzag_concavify_step(&g);
    assert!(s.sup_distance(&g) < 1e-10, "{}", s.sup_distance(&g));
}

#[test]
fn iteration_stays_between_input_and_closed_form() {
    for p in [1.5, 3.0] {
        let (id, e) = beurling(p);
        let shape = GridShape::square(33, 2.0).unwrap();
        let cfg = EnvelopeConfig { method: Method::Iterative, ..EnvelopeConfig::default() };
        let (grid, run) = compute_envelope_with(&id, &e, shape, &cfg).unwrap();
        assert!(run.converged, "p={p}: {run:?}");
        let input = ModuliGrid::sample_integrand(shape, &id, &e).unwrap();
        let exact = ModuliGrid::sample(shape, closed(&e)).unwrap();
        assert!(grid.dominates(&input, 0.0));
        assert!(exact.dominates(&grid, 1e-12), "p={p}");
    }
}

#[test]
fn f3_rises_where_the_burkholder_branch_applies() {
    let (id, e) = beurling(3.0);
    let shape = GridShape::square(33, 2.0).unwrap();
    let input = ModuliGrid::sample_integrand(shape, &id, &e).unwrap();
    let m = e.burkholder_norm();
    let h = shape.hx();
    let (grid, _) = compute_envelope(&id, &e, shape, 1e-6, 100).unwrap();
    let cfg = EnvelopeConfig { method: Method::Iterative, ..EnvelopeConfig::default() };
    let (iterated, _) = compute_envelope_with(&id, &e, shape, &cfg).unwrap();
    let (mut checked, mut lifted) = (0, 0);
    for j in 0..33 {
        for i in 1..33 {
            let (x, y) = (grid.x(i), grid.y(j));
            if x <= m * y {
                assert!((grid.get(i, j) - input.get(i, j)).abs() < 1e-4, "({x},{y})");
                continue;
            }
            if x < m * y + 2.0 * h {
                continue;
            }
            assert!(grid.get(i, j) > input.get(i, j) + 1e-6, "({x},{y})");
            if iterated.get(i, j) > input.get(i, j) {
                lifted += 1;
            }
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
    // the truncated plain iteration lifts less, but it does lift
    assert!(lifted * 2 > checked, "{lifted} of {checked}");
}

#[test]
fn converged_envelope_is_a_fixed_point() {
    let (id, e) = beurling(3.0);
    let (grid, run) =
        compute_envelope(&id, &e, GridShape::square(129, 2.0).unwrap(), 1e-6, 100).unwrap();
    assert!(run.converged);
    let again = zigzag_concavify_step(&grid);
    assert!(again.sup_distance(&grid) < 1e-6);
    assert!(again.dominates(&grid, 0.0));
}

#[test]
fn closed_form_matches_and_error_decreases_under_refinement() {
    for p in [1.5, 3.0] {
        let e = Exponent::new(p).unwrap();
        let r = closed_form_study(&e, &[65, 129, 257], 2.0, &EnvelopeConfig::default()).unwrap();
        let errs: Vec<f64> =
            [65, 129, 257].iter().map(|n| r.metric_or_nan(&format!("inner_half_error_{n}"))).collect();
        assert!(r.passed(), "p={p}: {errs:?}");
        assert!(errs[2] <= 5e-3);
    }
}

#[test]
fn windowed_mode_holds_the_window_edge() {
    let (id, e) = beurling(1.5);
    let shape = GridShape::square(33, 2.0).unwrap();
    let cfg = EnvelopeConfig {
        method: Method::Iterative,
        boundary: Boundary::Windowed,
        ..EnvelopeConfig::default()
    };
    let (grid, _) = compute_envelope_with(&id, &e, shape, &cfg).unwrap();
    let input = ModuliGrid::sample_integrand(shape, &id, &e).unwrap();
    for k in 0..33 {
        for (i, j) in [(0, k), (k, 0), (32, k), (k, 32)] {
            assert_eq!(grid.get(i, j), input.get(i, j));
        }
    }
}

#[test]
fn exhausted_iterations_are_reported() {
    let (id, e) = beurling(3.0);
    let shape = GridShape::square(33, 2.0).unwrap();
    let cfg = EnvelopeConfig { method: Method::Iterative, max_iter: 2, ..EnvelopeConfig::default() };
    let (_, run) = compute_envelope_with(&id, &e, shape, &cfg).unwrap();
    assert!(!run.converged);
    assert_eq!(run.iterations, 2);
    let cfg = EnvelopeConfig { max_iter: 0, ..EnvelopeConfig::default() };
    let err = compute_envelope(&id, &e, shape, cfg.tol, cfg.max_iter).unwrap_err();
    assert!(matches!(err, EnvelopeError::NotConverged { .. }));
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(matches!(GridShape::square(32, 1.0), Err(EnvelopeError::TooFewNodes { .. })));
    assert!(GridShape::square(33, 0.0).is_err());
    let (id, e) = beurling(3.0);
    let shape = GridShape::square(33, 1.0).unwrap();
    let bad = EnvelopeConfig { tol: 0.0, ..EnvelopeConfig::default() };
    assert!(matches!(
        compute_envelope_with(&id, &e, shape, &bad),
        Err(EnvelopeError::BadTolerance(_))
    ));
    let skew = ModuliGrid::sample(GridShape::new(33, 41, 1.0, 1.0).unwrap(), |x, _| x).unwrap();
    assert!(zigzag_step_with(&skew, Boundary::Folded).is_err());
}

#[test]
fn csv_export_has_coordinate_header() {
    let g = ModuliGrid::sample(GridShape::square(33, 2.0).unwrap(), |x, y| x - y).unwrap();
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 34);
    assert_eq!(header[1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(header[33].parse::<f64>().unwrap(), 2.0);
    assert_eq!(lines.count(), 33);
}

#[test]
fn single_precision_runs() {
    let e = Exponent::new(3.0_f32).unwrap();
    let id = IntegrandId::BeurlingM(e.burkholder_norm());
    let (grid, run) =
        compute_envelope(&id, &e, GridShape::square(33, 2.0_f32).unwrap(), 1e-4, 50).unwrap();
    assert!(run.converged);
    let err = grid.inner_half_distance(|x, y| IntegrandId::EnvelopeClosedForm.eval_moduli(&e, x, y));
    assert!(err < 2e-2, "{err}");
    assert_eq!(run.profile_nodes, 512);
}
