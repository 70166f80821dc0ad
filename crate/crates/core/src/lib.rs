//! Rarefied sums of b-multiplicative sequences and the arithmetic behind them.
//!
//! The crate is organised around six areas:
//!
//! * [`sequences`]: digit-weight sequences, their partial sums in `O(log N)` and
//!   the root-of-unity twists used to isolate terms with `p | n`.
//! * [`fractal`]: the self-similar summatory function `ψ` and its periodic
//!   profile `F`.
//! * [`spectral`]: the circulant matrix `M = ∏ (I - T^{2^m})` whose spectrum
//!   controls the growth of rarefied Thue-Morse sums.
//! * [`combinatorics`]: subset-sum counts over `F_p^×`, the partition lattice
//!   and its Möbius function, and linear-form counts.
//! * [`cyclotomic`]: exact arithmetic in `Z[T]/(T^p - 1)`, norms, coset
//!   products and traces.
//! * [`lucas`]: Lucas and Fibonacci numbers, domino counts and factor
//!   congruences.

pub mod arith;
pub mod combinatorics;
pub mod cyclotomic;
mod error;
pub mod fractal;
pub mod lucas;
pub mod sequences;
pub mod spectral;

pub use error::{Error, Result};
pub use num_bigint::{BigInt, BigUint};
pub use num_complex::Complex64;
