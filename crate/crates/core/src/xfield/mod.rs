//! Exact scalar arithmetic and dense exact linear algebra.

mod matrix;
mod poly;
mod scalar;

pub use matrix::{Matrix, Rref, RowSpace};
pub use poly::{charpoly, roots_in_field, Poly};
pub use scalar::{is_prime, FieldSpec, Fp, Rational, Scalar};

