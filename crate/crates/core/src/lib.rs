//! Braid-theoretic invariants of period-doubling routes to chaos.
//!
//! The crate is split along the lines of the computation:
//!
//! * [`braid`]: braid words, permutations, inclusion and period-doubling cabling.
//! * [`laurent`] and [`burau`]: exact Burau matrices over `Z[t, t^-1]`, their
//!   evaluations, the integer specialization at `t = -1` and its spectral radius.
//! * [`modular`]: reduction mod `N`, finite matrix-group orders and the relative
//!   index of a cyclic braid subgroup.
//! * [`dehornoy`]: handle reduction and the left-invariant braid order.
//! * [`invariants`]: continued fractions, p-adic digit series and trace sequences.
//! * [`dynamics`]: periodic orbits of the Hénon family, doubling detection,
//!   cascades and braid extraction.
//! * [`pipeline`]: configuration, report assembly, comparison and persistence.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); exact code is generic
//! over [`laurent::Coefficient`]. The aliases below fix the types the pipeline uses.

// `!(x < tol)` is used on purpose so NaN fails the test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod braid;
pub mod burau;
pub mod dehornoy;
pub mod dynamics;
mod error;
pub mod invariants;
pub mod laurent;
pub mod modular;
pub mod pipeline;
mod scalar;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Real;

pub use braid::{BraidWord, Letter, Permutation, Sign};
pub use burau::IntMatrix;
pub use modular::{GroupClosure, ModMatrix};

use num_bigint::BigInt;

/// Laurent polynomial with arbitrary-precision integer coefficients.
pub type IntLaurentPoly = laurent::LaurentPoly<BigInt>;
/// Square matrix of [`IntLaurentPoly`] entries; the home of Burau images.
pub type BurauMatrix = laurent::LaurentMatrix<BigInt>;
/// Hénon parameters in double precision.
pub type Henon = dynamics::HenonParams<f64>;
/// Periodic orbit in double precision.
pub type Orbit = dynamics::MapOrbit<f64>;
/// Cascade record in double precision.
pub type Cascade = dynamics::CascadeRecord<f64>;
/// Straight parameter segment in double precision.
pub type Path = dynamics::ParameterPath<f64>;
