//! Desk-scale models of the Bost–Connes system over ℚ and of the
//! complex-multiplication system of an imaginary quadratic field.
//!
//! The crate is layered bottom-up:
//!
//! - [`exact`]: rationals, torsion labels in ℚ/ℤ, exact cyclotomic numbers,
//!   arithmetic functions and extended-precision helpers.
//! - [`bc`]: the rational Hecke algebra of the BC system in normal form, its
//!   representations on ℓ²(ℕ×), Gibbs/KMS states and ground states.
//! - [`quad`]: ideals, binary quadratic forms and class groups in the maximal
//!   order of ℚ(√D), plus Dedekind zeta and L-series partial sums.
//! - [`cm`]: finite models of K-lattices, the ideal semigroup action, CM KMS
//!   states, symmetry covariance and projection formulas for class characters.
//! - [`classfield`]: j-invariants at CM points and Hilbert class polynomials.
//! - [`report`]: serializable state reports.

pub mod bc;
pub mod classfield;
pub mod cm;
pub mod error;
pub mod exact;
pub mod quad;
pub mod report;

pub use error::{Error, Result};
