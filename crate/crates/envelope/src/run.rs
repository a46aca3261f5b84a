use bvlab_kernel::{Exponent, IntegrandId, Scalar};
use bvlab_report::{ExperimentReport, Verdict};

use crate::profile::HomogeneousProfile;
use crate::zigzag::{zigzag_step_with, Boundary};
use crate::{EnvelopeError, GridShape, ModuliGrid};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Acceptance threshold for the closed-form comparison.
pub const CLOSED_FORM_TOL: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Solve the homogeneous profile exactly, sample it, then sweep.
    /// `profile_nodes` defaults to `64 (n - 1)` for an `n`-node axis.
    Homogeneous { profile_nodes: Option<usize> },
    /// Sweep starting from the raw samples.
    Iterative,
}

impl Default for Method {
    fn default() -> Self {
        Method::Homogeneous { profile_nodes: None }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnvelopeConfig<T> {
    pub tol: T,
    pub max_iter: usize,
    pub boundary: Boundary,
    pub method: Method,
}

impl<T: Scalar> Default for EnvelopeConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(DEFAULT_TOL),
            max_iter: DEFAULT_MAX_ITER,
            boundary: Boundary::default(),
            method: Method::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRun {
    pub iterations: usize,
    pub sup_change_history: Vec<f64>,
    pub converged: bool,
    /// Half-width `N` of the profile grid, zero for the iterative method.
    pub profile_nodes: usize,
    pub policy_updates: usize,
}

impl EnvelopeRun {
    pub fn last_change(&self) -> f64 {
        self.sup_change_history.last().copied().unwrap_or(0.0)
    }
}

/// Envelope with default settings; fails when `max_iter` is exhausted.
pub fn compute_envelope<T: Scalar>(
    id: &IntegrandId<T>,
    e: &Exponent<T>,
    shape: GridShape<T>,
    tol: T,
    max_iter: usize,
) -> Result<(ModuliGrid<T>, EnvelopeRun), EnvelopeError> {
    let cfg = EnvelopeConfig { tol, max_iter, ..EnvelopeConfig::default() };
    let (grid, run) = compute_envelope_with(id, e, shape, &cfg)?;
    if !run.converged {
        return Err(EnvelopeError::NotConverged {
            iterations: run.iterations,
            last_change: run.last_change(),
        });
    }
    Ok((grid, run))
}

/// Envelope with explicit settings. Non-convergence is reported in the run.
pub fn compute_envelope_with<T: Scalar>(
    id: &IntegrandId<T>,
    e: &Exponent<T>,
    shape: GridShape<T>,
    cfg: &EnvelopeConfig<T>,
) -> Result<(ModuliGrid<T>, EnvelopeRun), EnvelopeError> {
    if !(cfg.tol > T::zero()) {
        return Err(EnvelopeError::BadTolerance(cfg.tol.to_f64_lossy()));
    }
    let input = ModuliGrid::sample_integrand(shape, id, e)?;
    let (start, profile_nodes, policy_updates) = match cfg.method {
        Method::Iterative => (input.clone(), 0, 0),
        Method::Homogeneous { profile_nodes } => {
            if !(id.degree(e) > T::zero()) {
                return Err(EnvelopeError::NotHomogeneous);
            }
            let n = profile_nodes.unwrap_or(64 * (shape.nx.max(shape.ny) - 1));
            let prof = HomogeneousProfile::solve(id, e, n)?;
            let sampled = ModuliGrid::sample(shape, |x, y| prof.eval(x, y))?;
            let values =
                sampled.values.iter().zip(&input.values).map(|(a, b)| a.max(*b)).collect();
            (
                ModuliGrid::from_values(shape, values)?,
                prof.half_nodes(),
                prof.policy_updates,
            )
        }
    };
    sweep(start, cfg, profile_nodes, policy_updates)
}

fn sweep<T: Scalar>(
    mut grid: ModuliGrid<T>,
    cfg: &EnvelopeConfig<T>,
    profile_nodes: usize,
    policy_updates: usize,
) -> Result<(ModuliGrid<T>, EnvelopeRun), EnvelopeError> {
    let mut run = EnvelopeRun {
        iterations: 0,
        sup_change_history: Vec::new(),
        converged: false,
        profile_nodes,
        policy_updates,
    };
    while run.iterations < cfg.max_iter {
        let next = zigzag_step_with(&grid, cfg.boundary)?;
        let change = next.sup_distance(&grid);
        grid = next;
        run.iterations += 1;
        run.sup_change_history.push(change.to_f64_lossy());
        if change < cfg.tol {
            run.converged = true;
            break;
        }
    }
    Ok((grid, run))
}

/// Computes the envelope of `|xi|^p - (p*-1)^p |zeta|^p` on `[0, len]²` for
/// each node count and compares it with the closed form on the inner half-window.
pub fn closed_form_study(
    e: &Exponent<f64>,
    sizes: &[usize],
    len: f64,
    cfg: &EnvelopeConfig<f64>,
) -> Result<ExperimentReport, EnvelopeError> {
    let id = IntegrandId::BeurlingM(e.burkholder_norm());
    let mut report = ExperimentReport::new("envelope")
        .param("p", e.p())
        .param("len", len)
        .param("sizes", sizes.to_vec())
        .param("tol", cfg.tol)
        .param("boundary", cfg.boundary.as_str())
        .param(
            "method",
            match cfg.method {
                Method::Iterative => "iterative",
                Method::Homogeneous { .. } => "homogeneous",
            },
        );
    let mut errors = Vec::new();
    let mut converged = true;
    for &n in sizes {
        let shape = GridShape::square(n, len)?;
        let (grid, run) = compute_envelope_with(&id, e, shape, cfg)?;
        let err = grid
            .inner_half_distance(|x, y| IntegrandId::EnvelopeClosedForm.eval_moduli(e, x, y));
        let input = ModuliGrid::sample_integrand(shape, &id, e)?;
        report.set_metric(&format!("inner_half_error_{n}"), err);
        report.set_metric(&format!("sweeps_{n}"), run.iterations as f64);
        report.set_metric(&format!("last_change_{n}"), run.last_change());
        report.set_metric(&format!("profile_nodes_{n}"), run.profile_nodes as f64);
        report.set_metric(
            &format!("majorizes_input_{n}"),
            f64::from(u8::from(grid.dominates(&input, 0.0))),
        );
        converged &= run.converged && grid.dominates(&input, 0.0);
        errors.push(err);
    }
    let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
    let within = errors.iter().all(|&e| e <= CLOSED_FORM_TOL);
    report.set_metric("max_inner_half_error", errors.iter().copied().fold(0.0, f64::max));
    Ok(report.with_verdict(Verdict::from_check(decreasing && within && converged)))
}
