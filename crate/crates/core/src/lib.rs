//! Isotropic averaging operators on the lattice `Z^d`.
//!
//! The crate is organised around four modules:
//!
//! - [`operators`]: the operator abstraction and the built-in examples (mean,
//!   implicit p-laplacian, p-harmonious, infinity-laplacian, median, eikonal,
//!   weighted mean).
//! - [`verifier`]: sampled certification of the structural axioms, with a
//!   concrete witness for every failure.
//! - [`lattice`]: boxes `B_N`, grid functions, the Dirichlet relaxation solver,
//!   lattice isometries and file formats.
//! - [`analysis`]: Harnack, zero-propagation and growth checks on solved grids,
//!   the neighbour-ratio experiment and the explicit counterexamples.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod lattice;
pub mod operators;
mod sampling;
pub mod verifier;

pub use error::{Error, Result};
pub use operators::{AveragingOperator, Classification, OperatorKind, OperatorSpec};

/// Crate version, embedded in machine-readable reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
