//! Complex-multiplication system of an imaginary quadratic field at class
//! group resolution.

pub mod lattice;
pub mod projection;
pub mod state;

pub use lattice::{cm_function_eval, klattice_action, CMFunction, KLatticePoint};
pub use projection::{cm_projection, ja_state, ja_sum, uniqueness_decay_report, EulerValue};
pub use state::{
    cm_ground_state, cm_rep_relations_check, cm_state_value, cm_symmetry_covariance_check, TruncatedCMRep,
};
