//! Exact linear-programming bounds on the minimum average Hamming distance
//! of binary codes, together with the Krawtchouk, distance-distribution, and
//! Boolean Fourier machinery the bounds are built from.
//!
//! Everything that can be exact is exact: Krawtchouk values are `BigInt`,
//! distance and dual-distance distributions are `BigRational`, and the
//! simplex solver pivots over rationals so LP optima come out as equalities,
//! not approximations. Floating point appears only where a quantity is
//! genuinely irrational (entropy-style bounds, square roots).

pub mod arith;
pub mod bounds;
pub mod code;
pub mod error;
pub mod fourier;
pub mod krawtchouk;
pub mod lp;
pub mod oracle;

pub use error::{Error, Result};

/// Exact rational scalar used throughout.
pub type Rational = num::BigRational;
/// Exact integer scalar used throughout.
pub type Int = num::BigInt;
