//! The Bost–Connes system: algebra, representations and states.

pub mod algebra;
pub mod kms;
pub mod parse;
pub mod rep;

pub use algebra::{bc_adjoint, bc_mul, bc_sigma_imaginary, bc_symmetry, sigma_weight, BCElement, BCMonomial, WeightedElement};
pub use kms::{
    eisenstein_e1a, eisenstein_lattice_sum, galois_intertwine_check, gibbs_value, ground_state_value, ground_symmetry_is_regular,
    haar_average,
    kms_condition_residual, kms_high_temp_value, kms_low_temp_value, PartitionFunction,
};
pub use parse::parse_element;
pub use rep::{rep_matrix, RepMatrix, SymmetryClass, TruncatedRep};
