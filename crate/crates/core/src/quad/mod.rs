//! Arithmetic of imaginary quadratic fields: ideals, forms, class groups and
//! zeta partial sums.

pub mod classgroup;
pub mod field;
pub mod form;
pub mod ideal;
pub mod zeta;

pub use classgroup::{ideal_class, is_principal_with_generator, ClassGroup};
pub use field::{is_fundamental_discriminant, negative_fundamental_discriminants, QuadElement, QuadField};
pub use form::{compose, QuadForm};
pub use ideal::{factor_ideal, prime_ideals_above, prime_ideals_up_to, PrimeIdeal, QuadIdeal, Splitting};
pub use zeta::{dedekind_zeta, dirichlet_l, ideal_count_coeffs};
