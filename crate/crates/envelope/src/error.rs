use bvlab_kernel::KernelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnvelopeError {
    #[error("grid needs at least 33 nodes per axis, got {nx}x{ny}")]
    TooFewNodes { nx: usize, ny: usize },
    #[error("grid extent must be positive and finite, got [0,{x_max}]x[0,{y_max}]")]
    BadExtent { x_max: f64, y_max: f64 },
    #[error("expected {expected} grid values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("non-finite grid value at ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("diagonal lines need square cells, got hx={hx}, hy={hy}")]
    NonSquareCells { hx: f64, hy: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("integrand is not homogeneous of positive degree")]
    NotHomogeneous,
    #[error("policy iteration met a singular system at N={n}")]
    SingularPolicy { n: usize },
    #[error("policy iteration did not settle at N={n} after {updates} updates")]
    PolicyIterationStalled { n: usize, updates: usize },
    #[error("no convergence after {iterations} sweeps, last sup-change {last_change:e}")]
    NotConverged { iterations: usize, last_change: f64 },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("csv export failed: {0}")]
    Csv(#[from] csv::Error),
}
