//! Exact Chevalley–Eilenberg complexes, cyclic deformation retracts,
//! homotopy transfer of L∞ and C∞ structures, and BV master-equation checks.
//!
//! All arithmetic is over exact rationals, so every vanishing statement is an
//! exact zero rather than a floating-point tolerance.

pub mod bv_quantum;
pub mod ce_complex;
pub mod cli;
pub mod coefficients;
pub mod error;
pub mod graded;
pub mod lie_algebra;
pub mod linalg;
pub mod multivector;
pub mod poly;
pub mod scalar;
pub mod sdr;
pub mod sign;
pub mod transfer;

pub use error::{Error, Result};
