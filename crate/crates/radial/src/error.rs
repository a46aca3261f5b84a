use bvlab_kernel::KernelError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RadialError {
    #[error("invalid profile: {0}")]
    BadProfile(String),
    #[error("profile not admissible: {0}")]
    NotAdmissible(String),
    #[error("radius {r} outside (0, {radius}]")]
    RadiusOutOfRange { r: f64, radius: f64 },
    #[error("quadrature stopped at relative error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("no closed form for this orientation at p = {p}")]
    OrientationMismatch { p: f64 },
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
