//! Numerical laboratory for time-frequency and wavelet localization operators.
//!
//! Operators are built as finite Hermitian matrices in orthonormal monomial
//! bases of the Fock space or of weighted Bergman spaces on the disc. The
//! crate checks the radial (disk and annulus) eigenfunction results, runs a
//! probe-based inverse procedure that decides whether a hidden domain is a
//! centered disk, and cross-validates everything against a time-domain
//! short-time Fourier transform.

// Tolerance tests are written as `!(x <= tol)` so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bergman_wavelet;
pub mod error;
pub mod fock_op;
pub mod frame_lab;
pub mod geometry;
pub mod inverse_probe;
pub mod io;
pub mod quadrature;
pub mod special_fn;
pub mod stft_bridge;
pub mod validation;

pub use error::{Error, Result};
