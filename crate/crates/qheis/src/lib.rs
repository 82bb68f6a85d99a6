//! Numerical harmonic analysis on the quaternion Heisenberg group: sampled
//! fields, Euclidean and group Fourier transforms, the Radon transform with
//! its inversions, and continuous wavelet transforms.
//!
//! Pure algebra (quaternions, group laws, Fock matrix coefficients, radial
//! profiles) comes from [`qheis_core`] and is re-exported as [`core`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub use qheis_core as core;

pub mod cli;
pub mod config;
pub mod efourier;
pub mod error;
pub mod factory;
pub mod fft;
pub mod field;
pub mod gft;
pub mod grid;
pub mod interp;
pub mod radon;
pub mod report;
pub mod suites;
pub mod wavelet;

pub use error::{Error, Result};
pub use field::{Domain, Field};
pub use grid::GridSpec;
