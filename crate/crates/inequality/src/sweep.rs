use bvlab_kernel::{Exponent64, Gradient, Integrand, PlanarGradient};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Absolute tolerance on the gap after normalizing to `|xi| + |zeta| = 1`.
pub const PASS_TOL: f64 = 1e-12;
/// Deterministic points on the segment swept before the random samples.
pub const BOUNDARY_POINTS: usize = 10_001;

/// `lhs_constant · lhs(g) <= rhs_constant · rhs(g)`.
#[derive(Debug, Clone)]
pub struct InequalityCase {
    pub name: String,
    pub lhs: Integrand,
    pub lhs_constant: f64,
    pub rhs: Integrand,
    pub rhs_constant: f64,
    pub sample_domain: String,
    /// Extra segment abscissae swept deterministically, e.g. shared zeros of both sides.
    pub anchors: Vec<f64>,
}

impl InequalityCase {
    pub fn sides(&self, e: &Exponent64, g: &Gradient) -> (f64, f64) {
        (
            self.lhs_constant * self.lhs.eval(e, g),
            self.rhs_constant * self.rhs.eval(e, g),
        )
    }

    pub fn gap(&self, e: &Exponent64, g: &Gradient) -> f64 {
        let (l, r) = self.sides(e, g);
        l - r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub point: Gradient,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl SweepConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            tol: PASS_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub evaluated: usize,
    /// The point with the largest gap.
    pub worst: Violation,
    pub violations: usize,
    /// First violation in sweep order.
    pub first_violation: Option<Violation>,
    /// Points with `|gap| <= tol`, in sweep order, capped at a few entries.
    pub equality_points: Vec<Gradient>,
    pub equality_count: usize,
}

const EQUALITY_KEEP: usize = 8;

/// Sweeps the boundary grid, then `samples` random points with random phases.
pub fn run_sweep(case: &InequalityCase, e: &Exponent64, cfg: &SweepConfig) -> SweepOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = SweepOutcome {
        evaluated: 0,
        worst: Violation {
            point: Gradient::default(),
            lhs_value: f64::NAN,
            rhs_value: f64::NAN,
            gap: f64::NEG_INFINITY,
        },
        violations: 0,
        first_violation: None,
        equality_points: Vec::new(),
        equality_count: 0,
    };
    let mut visit = |g: Gradient| {
        let (l, r) = case.sides(e, &g);
        let v = Violation {
            point: g,
            lhs_value: l,
            rhs_value: r,
            gap: l - r,
        };
        out.evaluated += 1;
        if v.gap > out.worst.gap || out.worst.gap.is_nan() {
            out.worst = v;
        }
        if v.gap > cfg.tol || v.gap.is_nan() {
            out.violations += 1;
            out.first_violation.get_or_insert(v);
        }
        if v.gap.abs() <= cfg.tol {
            out.equality_count += 1;
            if out.equality_points.len() < EQUALITY_KEEP {
                out.equality_points.push(g);
            }
        }
    };
    let last = (BOUNDARY_POINTS - 1) as f64;
    for k in 0..BOUNDARY_POINTS {
        let x = k as f64 / last;
        visit(PlanarGradient::from_moduli(x, 1.0 - x));
    }
    for &x in &case.anchors {
        visit(PlanarGradient::from_moduli(x, 1.0 - x));
    }
    for _ in 0..cfg.samples {
        let x: f64 = rng.random();
        let a: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let b: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        visit(PlanarGradient::new(
            Complex64::from_polar(x, a),
            Complex64::from_polar(1.0 - x, b),
        ));
    }
    out
}

/// Largest relative deviation of `gap(t·g)` from `t^d · gap(g)` over `pairs` random draws.
pub fn scale_invariance(case: &InequalityCase, e: &Exponent64, degree: f64, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ca1e);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let x: f64 = rng.random();
        let t: f64 = 0.05 + 20.0 * rng.random::<f64>();
        let g = PlanarGradient::new(
            Complex64::from_polar(x, rng.random::<f64>() * 6.0),
            Complex64::from_polar(1.0 - x, rng.random::<f64>() * 6.0),
        );
        let (l0, r0) = case.sides(e, &g);
        let (l1, r1) = case.sides(e, &g.scale(t));
        let s = t.powf(degree);
        // samples have |xi| + |zeta| = 1, so 1 is the natural scale when both sides vanish together
        let denom = (l0.abs() + r0.abs()).max(1.0) * s;
        worst = worst.max(((l1 - r1) - s * (l0 - r0)).abs() / denom);
    }
    worst
}
