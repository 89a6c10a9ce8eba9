//! Spectral data, reproducing kernels, heat kernels and small-time heat
//! coefficients for the magnetic Laplacians `L_nu` on complex projective space `CP^n`.

pub mod error;
pub mod exactnum;
pub mod extended;
pub mod heat;
pub mod heatcoeff;
pub mod kernels;
pub mod orthopoly;
pub mod quadrature;
pub mod spectrum;

pub use error::{Error, Result};
pub use exactnum::Rational;
