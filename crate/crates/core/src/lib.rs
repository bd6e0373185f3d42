//! Exact Tribonacci and Tribonacci-Lucas arithmetic over every integer index.
//!
//! The crate is organised around the two number sequences
//!
//! ```text
//! T(n) = T(n-1) + T(n-2) + T(n-3),   T(0) = 0, T(1) = 1, T(2) = 1
//! K(n) = K(n-1) + K(n-2) + K(n-3),   K(0) = 3, K(1) = 1, K(2) = 3
//! ```
//!
//! extended backwards to negative subscripts, and the 3x3 matrix sequences
//! built from them. Every exact path uses arbitrary precision integers or
//! reduced fractions; the [`analytic`] module is the only place where
//! approximations appear, and it is always checked against the exact engine.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod exact;
pub mod genfunc;
pub mod identity;
pub mod mat3;
pub mod matrix_seq;
pub mod sums;

pub use error::{Error, Result};
pub use exact::{
    eval_sequence, sequence_slice, tribonacci, tribonacci_lucas, BuiltinSeq, Sequence, SequenceSpec,
};
pub use mat3::{IntMat3, Mat3, RatMat3};
pub use num_bigint::BigInt;

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Signed sequence index.
pub type Index = i64;

/// Shorthand for building an integral [`Rational`].
pub fn rational_from_int(value: impl Into<BigInt>) -> Rational {
    Rational::from_integer(value.into())
}
