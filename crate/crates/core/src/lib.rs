//! Numerical laboratory for the stable self-similar blowup of the focusing
//! cubic wave equation in odd space dimensions: similarity-frame dynamics
//! on the unit ball, the graded higher-energy inner product and its
//! dissipation inequalities, hypergeometric mode stability, discretized
//! spectra of the linearized generator, and nonlinear evolution with
//! rapidity modulation and blowup-time shooting.

pub mod energy;
pub mod error;
pub mod evolution;
pub mod geometry;
pub mod grid;
pub mod operators;
pub mod poly;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
