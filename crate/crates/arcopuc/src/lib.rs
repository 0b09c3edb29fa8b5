//! Discrete Fourier extension on equispaced samples, analysed through
//! orthogonal polynomials on an arc of the unit circle.

pub mod asymptotics;
pub mod equilibrium;
pub mod error;
pub mod fourext;
pub mod highprec;
pub mod io;
pub mod opuc;
pub mod params_lattice;
pub mod quadrature;
pub mod study;

pub use error::{Error, Result};
pub use highprec::{ExtendedComplex, ExtendedReal};
pub use opuc::OpucSystem;
pub use params_lattice::{make_params, ArcLattice, ExtensionParams, Rational};
