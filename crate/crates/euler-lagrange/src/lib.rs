//! Euler–Lagrange checks for isotropic integrands `E(u, v)` of the moduli
//! `u = |f_z|`, `v = |f_z̄|`: the pair of second order equations, their
//! radial reduction, and the ODE that forces homogeneous solutions to be
//! of Burkholder type.

mod error;
mod integrand;
mod ode;
mod residual;
mod study;

pub use error::ElError;
pub use integrand::{
    Burkholder, Derivs, FiniteDifference, HomogeneousCubic, IntegrandUV, PowerU, SumSquares, FD_STEP,
};
pub use ode::{ode_reduction_check, BSolution, ODE_STEPS, ODE_TOL};
pub use residual::{
    pde_pair_residual, pde_pair_scaled, radial_el_residual, radial_el_residual_expanded,
    second_equation_as_written, ElResidual,
};
pub use study::{
    burkholder_pde_study, distance_from_burkholder, log_grid, pde_grid_report, radial_el_study,
    radial_samples, random_cubics, sample_radii, uniqueness_probe, write_residual_csv, AXIS_RATIO,
    EXPONENTS, GRID_HI, GRID_LO, PDE_TOL, RADIAL_TOL, UNIQUENESS_TOL,
};

pub type Burk = Burkholder<f64>;
pub type Cubic = HomogeneousCubic<f64>;
