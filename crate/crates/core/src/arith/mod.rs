//! Exact scalars and dense symmetric linear algebra.

mod ldl;
mod matrix;
mod surd;

pub use ldl::{ldl_certify, LdlFactors, PsdCertificate};
pub use matrix::{dot, kernel_basis, mat_equal, unit_vector, SymMatrix};
pub use surd::{
    common_radicand, int, isqrt, rational, rational_to_f64, square_free_part, surd_sign, QuadSurd,
    Rational, Scalar,
};
