//! Allocation-light algebra for harmonic analysis on the quaternion
//! Heisenberg group 𝒬 = ℚ × Im ℚ.
//!
//! This crate holds everything that does not touch a sampled grid:
//! quaternion arithmetic and Sp(1), the group law of 𝒬 and of its affine
//! automorphism group 𝐏, the unitary representation `U` acting on
//! closed-form functions, the Fock-space matrix coefficients of the
//! Schrödinger-type representations `π_a`, one-dimensional quadrature
//! rules, radial wavelet profiles and the subLaplacian.
//!
//! Grids, FFTs and file formats live in the `qheis` crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod fock;
pub mod form;
pub mod group;
pub mod math;
pub mod quad;
pub mod quat;
pub mod radial;
pub mod sublap;

pub use error::CoreError;
pub use form::Form;
pub use group::{AffinePoint, GroupPoint};
pub use num_complex::Complex64;
pub use quat::{ImQuaternion, Quaternion, UnitQuaternion};
