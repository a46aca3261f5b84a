//! Discrete Beurling transform on a periodic grid via the Fourier multiplier
//! `conj(κ)/κ`, and `L^p` ratio scans over a family of radial stretchings.

mod error;
mod family;
mod field;
mod scan;
mod transform;

pub use error::BeurlingError;
pub use family::{LogProfile, DEFAULT_R_CAP, DEFAULT_R_OUTER, DEFAULT_WIDTH};
pub use field::{GridField, MIN_N};
pub use scan::{
    alpha_floor, best, check_alpha, default_alphas, lp_ratio, norm_lower_bound_scan, scan_report, scan_with,
    write_scan_csv, NormEstimate, ALLOWANCE, DEFAULT_L, DEFAULT_N,
};
pub use transform::{beurling_apply, beurling_symbol, signed_frequency, BeurlingPlan};

pub type Field = GridField<f64>;
pub type Plan = BeurlingPlan<f64>;
pub type Estimate = NormEstimate<f64>;
