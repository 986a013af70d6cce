//! Numerical lab for off-diagonal long-range order and single-particle
//! entanglement between two regions of a box.
//!
//! The pieces:
//! - [`fock_extraction`]: the four-configuration extraction protocol and its
//!   two-qubit negativity.
//! - [`bose_gas`]: ideal Bose gas in a hard-wall box, grand canonical and
//!   canonical occupations.
//! - [`geometry`]: region probabilities and restricted-mode Gram matrices.
//! - [`negativity`]: closed forms for the single-particle negativity plus an
//!   eigensolver oracle.
//! - [`odlro`]: position-space `rho_1` and the spectral ODLRO detector.

// Negated comparisons are used on purpose so NaN inputs fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bose_gas;
pub mod error;
pub mod fock_extraction;
pub mod geometry;
mod linalg;
pub mod negativity;
pub mod odlro;
pub mod quadrature;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
