//! Finite-dimensional real spectral triples and their twists.
//!
//! The crate builds real (twisted) spectral triples over direct sums of
//! matrix algebras, checks their axioms, performs the twist by grading and
//! computes real parts. Every check runs either in exact Gaussian-rational
//! arithmetic ([`scalar::Rational`]) or in `f64` with a global tolerance.

pub mod algebra;
pub mod document;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod oneforms;
pub mod realpart;
pub mod scalar;
pub mod standard_model;
pub mod triple;
pub mod twist;

pub use error::{Error, Result};
pub use scalar::{set_tolerance, tolerance, Rational, RealScalar};
