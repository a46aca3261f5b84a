//! Rank-one concave envelopes of isotropic integrands.
//!
//! An isotropic integrand is a function of the moduli `(x, y) = (|f_z|, |f_zbar|)`.
//! Its rank-one concave envelope is the least majorant that is concave along
//! both diagonal directions of the moduli plane. [`zigzag_concavify_step`]
//! performs one sweep of that relaxation on a [`ModuliGrid`];
//! [`compute_envelope`] iterates it, by default after seeding the grid with
//! the exact discrete solution of the homogeneous problem
//! ([`HomogeneousProfile`]).

mod error;
mod grid;
pub mod hull;
mod profile;
mod run;
mod zigzag;

pub use error::EnvelopeError;
pub use grid::{GridShape, ModuliGrid, MIN_NODES};
pub use profile::HomogeneousProfile;
pub use run::{
    closed_form_study, compute_envelope, compute_envelope_with, EnvelopeConfig, EnvelopeRun,
    Method, CLOSED_FORM_TOL, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use zigzag::{zigzag_concavify_step, zigzag_step_with, Boundary};

pub type Grid = ModuliGrid<f64>;
pub type Shape = GridShape<f64>;
pub type Profile = HomogeneousProfile<f64>;
