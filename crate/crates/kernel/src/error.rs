use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("exponent p = {0} outside (1, {max}]", max = crate::P_MAX)]
    InvalidExponent(f64),
    #[error("parameter {name} = {value} violates {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("gradient is not orientation preserving (|f_z| = {xi} <= |f_zbar| = {zeta})")]
    NotOrientationPreserving { xi: f64, zeta: f64 },
    #[error("matrix dimension {0} is below 2")]
    DimensionTooSmall(usize),
    #[error("matrix has {got} entries, expected {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("integrand {0} needs a full matrix, not a planar gradient")]
    NotPlanar(String),
}

impl KernelError {
    pub(crate) fn param(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Self::InvalidParameter {
            name,
            value,
            constraint,
        }
    }
}
