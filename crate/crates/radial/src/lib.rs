//! Radial stretchings `ρ(|z|) z/|z|`, radially linear maps `Λ(|x|) x`, and
//! their Burkholder-type energies.
//!
//! Core routines are generic over the scalar; the experiment drivers that
//! produce [`bvlab_report::ExperimentReport`]s work in `f64`.

mod comparison;
mod derivatives;
mod energy;
mod error;
mod zero_energy;
mod localmax;
mod profile;
pub mod quad;

pub use comparison::{
    radially_linear_comparison, radially_linear_energy, radially_linear_gradient, Mat2,
    MatrixProfile, DEFAULT_THETA, VIOLATION_TOL,
};
pub use derivatives::{radial_derivatives, radial_derivatives_at};
pub use energy::{
    closed_form_energy, energy_identity_report, energy_quadrature, profile_family, EnergyEstimate,
    IDENTITY_TOL, REL_TOL,
};
pub use error::RadialError;
pub use zero_energy::{example_11_energy, TOTAL_TOL};
pub use localmax::{local_max_experiment, BumpField, PolarGrid, ENERGY_TOL, MARGIN};
pub use profile::{
    Orientation, PowerPiece, RadialProfile, RhoFamily, ADMISSIBILITY_SAMPLES,
};

pub type Profile = RadialProfile<f64>;
pub type Rho = RhoFamily<f64>;
pub type Bump = BumpField<f64>;
