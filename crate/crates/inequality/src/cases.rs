use bvlab_kernel::{Exponent64, Gradient, IntegrandId, KernelError};
use bvlab_report::{ExperimentReport, Verdict};
use thiserror::Error;

use crate::sweep::{run_sweep, scale_invariance, InequalityCase, SweepConfig, SweepOutcome, PASS_TOL};

#[derive(Debug, Error, PartialEq)]
pub enum InequalityError {
    #[error("M = {m} is below p* - 1 = {bound}")]
    MBelowBurkholderNorm { m: f64, bound: f64 },
    #[error("M = {0} is below 1")]
    MBelowOne(f64),
    #[error("grid size {0} is below 16")]
    GridTooSmall(usize),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

const SCALE_PAIRS: usize = 100;

fn coords(g: &Gradient) -> Vec<f64> {
    vec![g.xi.re, g.xi.im, g.zeta.re, g.zeta.im]
}

fn sweep_report(
    name: &str,
    case: &InequalityCase,
    e: &Exponent64,
    degree: f64,
    samples: usize,
    seed: u64,
) -> (ExperimentReport, SweepOutcome) {
    let cfg = SweepConfig::new(samples, seed);
    let out = run_sweep(case, e, &cfg);
    let scale = scale_invariance(case, e, degree, SCALE_PAIRS, seed);
    let mut r = ExperimentReport::new(name)
        .param("p", e.p())
        .param("samples", samples as u64)
        .param("seed", seed)
        .param("tol", PASS_TOL)
        .param("case", case.name.clone())
        .param("sample_domain", case.sample_domain.clone())
        .metric("evaluated", out.evaluated as f64)
        .metric("max_gap", out.worst.gap)
        .metric("violations", out.violations as f64)
        .metric("equality_count", out.equality_count as f64)
        .metric("scale_invariance_max_rel", scale)
        .point("argmax_point", coords(&out.worst.point));
    if let Some(v) = out.first_violation {
        r = r.point("first_violation", coords(&v.point));
    }
    if let Some(g) = out.equality_points.first() {
        r = r.point("first_equality_point", coords(g));
    }
    r.verdict = Verdict::from_check(out.violations == 0 && scale < 1e-10);
    (r, out)
}

/// `F_p <= C_p · B_p` with `C_p = p(1-1/p*)^(p-1)`.
///
/// The report also carries `displayed_form_max_gap`, the worst gap of the
/// reversed arrangement `C_p · F_p <= B_p`, which fails at `(1, 0)` for `p != 2`.
pub fn verify_bebu(e: &Exponent64, samples: usize, seed: u64) -> ExperimentReport {
    let m = e.burkholder_norm();
    let case = InequalityCase {
        name: "F_p <= C_p B_p".into(),
        lhs: IntegrandId::BeurlingM(m),
        lhs_constant: 1.0,
        rhs: IntegrandId::Burkholder,
        rhs_constant: e.c_p(),
        sample_domain: "|xi|+|zeta|=1 with random phases".into(),
        anchors: vec![m / (1.0 + m)],
    };
    let (mut r, _) = sweep_report("verify_bebu", &case, e, e.p(), samples, seed);
    let reversed = InequalityCase {
        name: "C_p F_p <= B_p".into(),
        lhs_constant: e.c_p(),
        rhs_constant: 1.0,
        ..case
    };
    let rev = run_sweep(&reversed, e, &SweepConfig::new(0, seed));
    r.set_metric("displayed_form_max_gap", rev.worst.gap);
    r.set_metric("c_p", e.c_p());
    r.points.insert("displayed_form_argmax".into(), coords(&rev.worst.point));
    r
}

/// `|xi|^p - M^p|zeta|^p <= p (M/(1+M))^(p-1) [|xi| - M|zeta|](|xi|+|zeta|)^(p-1)` for `M >= p*-1`.
pub fn verify_m_pointwise(
    e: &Exponent64,
    m: f64,
    samples: usize,
    seed: u64,
) -> Result<ExperimentReport, InequalityError> {
    let bound = e.burkholder_norm();
    if !(m >= bound * (1.0 - 1e-12)) {
        return Err(InequalityError::MBelowBurkholderNorm { m, bound });
    }
    let case = InequalityCase {
        name: "F^M <= p(M/(1+M))^(p-1) B^M".into(),
        lhs: IntegrandId::BeurlingM(m),
        lhs_constant: 1.0,
        rhs: IntegrandId::BurkholderM(m),
        rhs_constant: e.pointwise_constant(m),
        sample_domain: "|xi|+|zeta|=1 with random phases".into(),
        anchors: vec![m / (1.0 + m)],
    };
    let (r, _) = sweep_report("verify_m_pointwise", &case, e, e.p(), samples, seed);
    Ok(r.param("M", m).metric("constant", e.pointwise_constant(m)))
}

/// `|xi|^4 - M^4|zeta|^4 <= c (|xi|^2 - M^2|zeta|^2)(|xi|^2 + |zeta|^2)` with `c = 2M^2/(1+M^2)`.
pub fn verify_aubert_pair(m: f64, samples: usize, seed: u64) -> Result<ExperimentReport, InequalityError> {
    if !(m >= 1.0) {
        return Err(InequalityError::MBelowOne(m));
    }
    // Degree 4 on both sides; the exponent only feeds the shared plumbing.
    let e = Exponent64::new(4.0)?;
    let c = 2.0 * m * m / (1.0 + m * m);
    let case = InequalityCase {
        name: "F_4^M <= c A^M".into(),
        lhs: IntegrandId::BeurlingM(m),
        lhs_constant: 1.0,
        rhs: IntegrandId::Aubert(m),
        rhs_constant: c,
        sample_domain: "|xi|+|zeta|=1 with random phases".into(),
        anchors: vec![m / (1.0 + m)],
    };
    let (r, out) = sweep_report("verify_aubert_pair", &case, &e, 4.0, samples, seed);
    let near = out.worst.point;
    Ok(r.param("M", m)
        .metric("constant", c)
        .point("near_equality_point", coords(&near)))
}

/// Envelope `>=` `F_p` on a grid over `[0,2]^2`, equality on the branch where
/// the closed form is `F_p` itself, and agreement of both branches on the ray
/// `|xi| = (p*-1)|zeta|`.
pub fn verify_envelope_majorant(e: &Exponent64, grid_n: usize) -> Result<ExperimentReport, InequalityError> {
    if grid_n < 16 {
        return Err(InequalityError::GridTooSmall(grid_n));
    }
    let m = e.burkholder_norm();
    let env = IntegrandId::EnvelopeClosedForm;
    let f = IntegrandId::BeurlingM(m);
    let b = IntegrandId::Burkholder;
    let h = 2.0 / (grid_n - 1) as f64;
    let p_big = e.p() >= 2.0;
    let (mut below, mut branch_err, mut worst_gap) = (0usize, 0.0f64, f64::NEG_INFINITY);
    let mut worst_at = vec![0.0, 0.0];
    for i in 0..grid_n {
        for j in 0..grid_n {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let ev = env.eval_moduli(e, x, y);
            let fv = f.eval_moduli(e, x, y);
            let scale = (x + y).powf(e.p()).max(1.0);
            let gap = (fv - ev) / scale;
            if gap > worst_gap {
                worst_gap = gap;
                worst_at = vec![x, y];
            }
            if gap > PASS_TOL {
                below += 1;
            }
            let on_f_branch = (m * y >= x) == p_big;
            if on_f_branch {
                branch_err = branch_err.max((ev - fv).abs() / scale);
            }
        }
    }
    let mut ray_err: f64 = 0.0;
    for k in 1..=grid_n {
        let y = k as f64 * h / (1.0 + m);
        let x = m * y;
        let scale = (x + y).powf(e.p());
        let fb = f.eval_moduli(e, x, y);
        let bb = e.c_p() * b.eval_moduli(e, x, y);
        ray_err = ray_err.max((fb - bb).abs() / scale);
    }
    let ok = below == 0 && branch_err <= PASS_TOL && ray_err <= 1e-10;
    Ok(ExperimentReport::new("verify_envelope_majorant")
        .param("p", e.p())
        .param("grid_n", grid_n as u64)
        .metric("violations", below as f64)
        .metric("max_gap", worst_gap)
        .metric("branch_max_err", branch_err)
        .metric("ray_max_err", ray_err)
        .point("argmax_point", worst_at)
        .with_verdict(Verdict::from_check(ok)))
}
