use bvlab_radial::RadialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ElError {
    #[error("need rho(r) > r rho'(r), got rho = {rho}, r rho' = {r_drho} at r = {r}")]
    OutsideAssumption { r: f64, rho: f64, r_drho: f64 },
    #[error("profile is not C2 at r = {r}")]
    NotSmooth { r: f64 },
    #[error("exponent must exceed 1, got {0}")]
    BadExponent(f64),
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
