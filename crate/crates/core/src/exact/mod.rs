//! Exact and extended-precision arithmetic kernels.

pub mod arith;
pub mod cyclotomic;
pub mod precision;
pub mod torsion;

pub use arith::{euler_totient, f_weight, f_weight_exact, f_weight_real, kronecker_symbol, moebius, ArithValue};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumber};
pub use precision::{ExtComplex, ExtReal, Precision};
pub use rug::{Integer, Rational};
pub use torsion::TorsionLabel;
