//! Rank-one concavity probing.
//!
//! For a base gradient `A` and a rank-one direction `X = (e^{iφ}, e^{iψ})` the
//! restriction `t ↦ E(A + tX)` must be concave. The probe scans a fixed
//! enumeration of `(base, φ, ψ, t)` and reports the first positive second
//! difference above tolerance. Because the integrands are isotropic, bases
//! with real non-negative entries lose no generality.

use bvlab_kernel::{Complex, Exponent, IntegrandId, PlanarGradient, Scalar};
use bvlab_report::{ExperimentReport, Verdict};
use rayon::prelude::*;
use thiserror::Error;

pub type Config = ProbeConfig<f64>;
pub type Result64 = ProbeResult<f64>;

pub const DEFAULT_PHASES: usize = 32;
pub const DEFAULT_T_POINTS: usize = 41;
pub const DEFAULT_BASES: usize = 65;
pub const DEFAULT_H: f64 = 1e-3;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum ProbeError {
    #[error("finite-difference step h = {0} outside [1e-6, 1e-2]")]
    StepOutOfRange(f64),
    #[error("probe needs at least one base, two phases and three t-points")]
    EmptySample,
    #[error("M grid is not sorted ascending")]
    UnsortedGrid,
}

#[derive(Debug, Clone)]
pub struct ProbeConfig<T> {
    pub bases: Vec<PlanarGradient<T>>,
    pub n_phase: usize,
    pub n_t: usize,
    pub h: T,
    /// Relative tolerance; the absolute threshold is `tol` times the local value scale.
    pub tol: T,
}

impl<T: Scalar> ProbeConfig<T> {
    /// Bases `(x, 1-x)` for `x = k/(n_bases-1)`, `32×32` phase pairs, 41 t-points.
    pub fn standard(n_bases: usize) -> Self {
        let n = n_bases.max(2);
        let last = T::from_usize_lossy(n - 1);
        let bases = (0..n)
            .map(|k| {
                let x = T::from_usize_lossy(k) / last;
                PlanarGradient::from_moduli(x, T::one() - x)
            })
            .collect();
        Self {
            bases,
            n_phase: DEFAULT_PHASES,
            n_t: DEFAULT_T_POINTS,
            h: T::lit(DEFAULT_H),
            tol: T::lit(DEFAULT_TOL),
        }
    }

    pub fn with_bases(mut self, bases: Vec<PlanarGradient<T>>) -> Self {
        self.bases = bases;
        self
    }

    pub fn validate(&self) -> Result<(), ProbeError> {
        if !(self.h >= T::lit(1e-6) && self.h <= T::lit(1e-2)) {
            return Err(ProbeError::StepOutOfRange(self.h.to_f64_lossy()));
        }
        if self.bases.is_empty() || self.n_phase < 2 || self.n_t < 3 {
            return Err(ProbeError::EmptySample);
        }
        Ok(())
    }

    pub fn direction(&self, i_phi: usize, i_psi: usize) -> PlanarGradient<T> {
        let step = T::TAU() / T::from_usize_lossy(self.n_phase);
        PlanarGradient::new(
            Complex::from_polar(T::one(), step * T::from_usize_lossy(i_phi)),
            Complex::from_polar(T::one(), step * T::from_usize_lossy(i_psi)),
        )
    }

    /// `t_k = (-1 + 2k/(n_t-1)) · |A|`, with `|A|` replaced by 1 at the origin.
    pub fn t_value(&self, base: &PlanarGradient<T>, k: usize) -> T {
        let norm = base.op_norm();
        let scale = if norm > T::zero() { norm } else { T::one() };
        let frac = T::from_usize_lossy(k) / T::from_usize_lossy(self.n_t - 1);
        (T::lit(2.0) * frac - T::one()) * scale
    }

    pub fn triples(&self) -> usize {
        self.bases.len() * self.n_phase * self.n_phase * self.n_t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness<T> {
    pub base: PlanarGradient<T>,
    pub direction: PlanarGradient<T>,
    pub t: T,
    pub second_difference: T,
    pub threshold: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeResult<T> {
    ConcaveOnSample { triples: usize, max_ratio: T },
    ViolationFound(Witness<T>),
}

impl<T: Scalar> ProbeResult<T> {
    pub fn is_violation(&self) -> bool {
        matches!(self, ProbeResult::ViolationFound(_))
    }

    pub fn witness(&self) -> Option<&Witness<T>> {
        match self {
            ProbeResult::ViolationFound(w) => Some(w),
            _ => None,
        }
    }

    pub fn verdict_name(&self) -> &'static str {
        if self.is_violation() {
            "violation-found"
        } else {
            "concave-on-sample"
        }
    }
}

/// `[E(A+(t+h)X) - 2E(A+tX) + E(A+(t-h)X)] / h²`.
pub fn second_difference<T: Scalar>(
    id: &IntegrandId<T>,
    e: &Exponent<T>,
    a: &PlanarGradient<T>,
    x: &PlanarGradient<T>,
    t: T,
    h: T,
) -> T {
    let (fm, f0, fp) = triple(id, e, a, x, t, h);
    (fp - T::lit(2.0) * f0 + fm) / (h * h)
}

fn triple<T: Scalar>(
    id: &IntegrandId<T>,
    e: &Exponent<T>,
    a: &PlanarGradient<T>,
    x: &PlanarGradient<T>,
    t: T,
    h: T,
) -> (T, T, T) {
    (
        id.eval(e, &a.along(x, t - h)),
        id.eval(e, &a.along(x, t)),
        id.eval(e, &a.along(x, t + h)),
    )
}

/// Value scale at a probe triple: the largest of the three samples and `|A+tX|^d`.
fn value_scale<T: Scalar>(
    id: &IntegrandId<T>,
    e: &Exponent<T>,
    a: &PlanarGradient<T>,
    x: &PlanarGradient<T>,
    t: T,
    vals: (T, T, T),
) -> T {
    let norm = a.along(x, t).op_norm().powf(id.degree(e));
    vals.0.abs().max(vals.1.abs()).max(vals.2.abs()).max(norm)
}

/// Scans every configured triple. Reports the first violation in the order
/// (base, φ, ψ, t), independent of thread scheduling.
pub fn probe_rank_one_concavity<T: Scalar>(
    id: &IntegrandId<T>,
    e: &Exponent<T>,
    cfg: &ProbeConfig<T>,
) -> Result<ProbeResult<T>, ProbeError> {
    cfg.validate()?;
    let np = cfg.n_phase;
    let per_base: Vec<Result<Witness<T>, T>> = cfg
        .bases
        .par_iter()
        .map(|base| scan_base(id, e, cfg, base, np))
        .collect();
    let mut max_ratio = T::neg_infinity();
    for r in per_base {
        match r {
            Ok(w) => return Ok(ProbeResult::ViolationFound(w)),
            Err(ratio) => max_ratio = max_ratio.max(ratio),
        }
    }
    Ok(ProbeResult::ConcaveOnSample {
        triples: cfg.triples(),
        max_ratio,
    })
}

/// Returns the first witness for this base, or the largest ratio of second
/// difference to threshold seen.
fn scan_base<T: Scalar>(
    id: &IntegrandId<T>,
    e: &Exponent<T>,
    cfg: &ProbeConfig<T>,
    base: &PlanarGradient<T>,
    np: usize,
) -> Result<Witness<T>, T> {
    let mut max_ratio = T::neg_infinity();
    let h2 = cfg.h * cfg.h;
    for i in 0..np {
        for j in 0..np {
            let dir = cfg.direction(i, j);
            for k in 0..cfg.n_t {
                let t = cfg.t_value(base, k);
                let vals = triple(id, e, base, &dir, t, cfg.h);
                let d2 = (vals.2 - T::lit(2.0) * vals.1 + vals.0) / h2;
                let threshold = cfg.tol * value_scale(id, e, base, &dir, t, vals);
                if d2 > threshold {
                    return Ok(Witness {
                        base: *base,
                        direction: dir,
                        t,
                        second_difference: d2,
                        threshold,
                    });
                }
                if threshold > T::zero() {
                    max_ratio = max_ratio.max(d2 / threshold);
                }
            }
        }
    }
    Err(max_ratio)
}

/// Probes the Aubert integrand at each `M`. The grid must be ascending.
pub fn probe_aubert_threshold<T: Scalar>(
    m_grid: &[T],
    cfg: &ProbeConfig<T>,
) -> Result<Vec<(T, ProbeResult<T>)>, ProbeError> {
    if m_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(ProbeError::UnsortedGrid);
    }
    // Degree 4 does not depend on the exponent; any valid one will do.
    let e = Exponent::new(T::lit(4.0)).expect("4 is a valid exponent");
    m_grid
        .iter()
        .map(|&m| probe_rank_one_concavity(&IntegrandId::Aubert(m), &e, cfg).map(|r| (m, r)))
        .collect()
}

/// Largest violating `M` and the smallest concave `M` above it, if the scan
/// shows a single transition.
pub fn transition<T: Scalar>(results: &[(T, ProbeResult<T>)]) -> Option<(T, T)> {
    let last_bad = results.iter().rposition(|(_, r)| r.is_violation())?;
    let first_good = results.get(last_bad + 1)?;
    results[last_bad + 1..]
        .iter()
        .all(|(_, r)| !r.is_violation())
        .then_some((results[last_bad].0, first_good.0))
}

pub fn report<T: Scalar>(id: &IntegrandId<T>, e: &Exponent<T>, cfg: &ProbeConfig<T>, res: &ProbeResult<T>) -> ExperimentReport {
    let mut r = ExperimentReport::new("probe_rank_one_concavity")
        .param("integrand", id.to_string())
        .param("p", e.p().to_f64_lossy())
        .param("h", cfg.h.to_f64_lossy())
        .param("tol", cfg.tol.to_f64_lossy())
        .param("bases", cfg.bases.len() as u64)
        .param("phases", cfg.n_phase as u64)
        .param("t_points", cfg.n_t as u64)
        .param("result", res.verdict_name());
    match res {
        ProbeResult::ConcaveOnSample { triples, max_ratio } => {
            r.set_metric("triples", *triples as f64);
            r.set_metric("max_ratio_to_threshold", max_ratio.to_f64_lossy());
        }
        ProbeResult::ViolationFound(w) => {
            let c = |z: Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
            r.points.insert("witness_base".into(), [c(w.base.xi), c(w.base.zeta)].concat());
            r.points.insert("witness_direction".into(), [c(w.direction.xi), c(w.direction.zeta)].concat());
            r.set_metric("witness_t", w.t.to_f64_lossy());
            r.set_metric("witness_second_difference", w.second_difference.to_f64_lossy());
            r.set_metric("witness_threshold", w.threshold.to_f64_lossy());
        }
    }
    // The probe itself has no expectation; callers set the verdict.
    r.with_verdict(Verdict::NotAsserted)
}
