//! Exact constructions and certificates for translated Euclidean distance
//! matrices of arithmetic progressions.
//!
//! `A_n` is the distance matrix of `{1, ..., n}` with entries `(j - i)^2` and
//! `B_n = A_n + f(n) I` with `f(n) = n(n^2 - 1)/6`, the smallest shift that
//! makes `A_n` positive semidefinite. The crate builds completely positive
//! factorizations of `B_n` and of larger shifts, integer factorizations, and
//! the exact verifiers used to check all of them. Arithmetic is exact
//! throughout: rationals, or a single quadratic field `Q(sqrt(s))` when a
//! construction needs an irrational shift.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop, clippy::result_large_err)]

extern crate alloc;

pub mod arith;
pub mod construct;
pub mod edm;
mod error;
pub mod factor;
pub mod integer;

pub use arith::{QuadSurd, Rational, Scalar, SymMatrix};
pub use error::{Error, Result};
pub use factor::{Atom, CpFactorization, VerificationReport};
