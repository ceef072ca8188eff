//! Desk-scale numerical checks for topological charge of unit triplet fields,
//! Dirac monopole flux and circulation, the Dirac quantization condition,
//! gamma-matrix algebra, and a first-Born probe of fermion phase constancy.
//!
//! Module map:
//!
//! - [`geometry`]: grids, spherical quadrature, finite-difference Jacobians,
//!   Levi-Civita symbols and unit triplet fields.
//! - [`topocharge`]: charge density, surface winding, magnetic and
//!   topological charge.
//! - [`monopole`]: Wu-Yang patch potentials, flux, circulation, quantization.
//! - [`diracalg`]: gamma matrices and the Klein-Gordon factorization.
//! - [`fermionprobe`]: source term, Helmholtz kernel, Born correction and the
//!   phase-constancy metric.
//! - [`cli`]: configuration, experiment orchestration and report emission.
//!
//! All reductions over quadrature nodes or grid cells go through
//! [`reduce`], whose summation tree depends only on the input length.

pub mod cli;
pub mod diracalg;
pub mod error;
pub mod fermionprobe;
pub mod geometry;
pub mod monopole;
pub mod reduce;
pub mod topocharge;

pub use error::{Error, Result};
