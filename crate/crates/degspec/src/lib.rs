//! Exact-arithmetic degree growth and spectral-gap analysis for rational
//! self-maps of projective varieties.

pub mod checks;
pub mod dynamics;
pub mod error;
pub mod lp;
pub mod maps;
pub mod matrix;
pub mod model;
pub mod multipoly;
pub mod poly;
pub mod rational;
pub mod spectrum;

pub use error::{Error, Result};
pub use matrix::QMatrix;
pub use poly::QPolynomial;
pub use rational::Rational;
pub use spectrum::{eigen_spectrum, spectral_radius, SpectrumEntry, DEFAULT_TOL};
