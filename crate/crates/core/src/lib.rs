//! Dyon–oscillator duality toolkit.
//!
//! Bilinear Hurwitz-family coordinate maps in dimensions 1, 2, 4 and 8, the
//! induced correspondence between oscillator and charge–dyon spectra,
//! closed-form wavefunctions, monopole gauge fields, and an independent
//! finite-volume eigenvalue solver used to certify the closed forms.

pub mod error;
pub mod fields;
pub mod oracle;
pub mod quad;
pub mod spectra;
pub mod specfun;
pub mod transforms;
pub mod verify;
pub mod wavefun;

pub use error::{Error, Result};
