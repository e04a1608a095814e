//! Direct and inverse Dirichlet spectral problem for the singular
//! Sturm–Liouville operator `-y'' + a(a+1)/x² y + q y` on `[0, 1]`.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod inverse;
pub mod numerics;
pub mod potentials;
pub mod solutions;
pub mod spectrum;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
