//! Matrix means in the Loewner order.
//!
//! The crate provides dense Hermitian arithmetic with a tolerance-aware
//! Loewner order, the classical Kubo–Ando means, checkers for the reverse
//! Cauchy inequality and its relatives, the constructive decompositions
//! behind the characterization of operator monotone functions, and
//! numerical operator-monotonicity tests.

pub mod constructions;
pub mod error;
pub mod function;
pub mod generate;
pub mod hermitian;
pub mod inequalities;
pub mod means;
pub mod monotonicity;

pub use error::{Error, Result};
pub use function::ScalarFunction;
pub use hermitian::{HermitianMatrix, OrderVerdict, Relation, SpectralData, TolerancePolicy};
pub use means::MeanRepresentation;
