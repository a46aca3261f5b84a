use bvlab_kernel::KernelError;
use bvlab_radial::RadialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BeurlingError {
    #[error("grid size must be a power of two and at least {min}, got {n}")]
    BadSize { n: usize, min: usize },
    #[error("period must be positive and finite, got {0}")]
    BadPeriod(f64),
    #[error("expected {expected} samples, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("non-finite sample at ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("plan is for n = {plan}, field has n = {field}")]
    PlanMismatch { plan: usize, field: usize },
    #[error("the L^p norm of the input vanishes")]
    ZeroDenominator,
    #[error("alpha = {alpha} outside ({lo}, 1) for p = {p}")]
    AlphaOutOfRange { alpha: f64, lo: f64, p: f64 },
    #[error("invalid profile: {0}")]
    BadProfile(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
