//! Sweeps that test a pointwise inequality `a·L(g) <= b·R(g)` between two
//! isotropic integrands and extract the worst point.
//!
//! Both sides are homogeneous of the same degree, so sampling the segment
//! `|xi| + |zeta| = 1` is exhaustive. Random phases are attached to each sample
//! so that the evaluation path through complex gradients is exercised too.

mod cases;
mod sweep;

pub use cases::{
    verify_aubert_pair, verify_bebu, verify_envelope_majorant, verify_m_pointwise, InequalityError,
};
pub use sweep::{
    run_sweep, scale_invariance, InequalityCase, SweepConfig, SweepOutcome, Violation,
    BOUNDARY_POINTS, PASS_TOL,
};
