//! Closed-form and numerical analysis of a one-dimensional non-Hermitian
//! particle in a linearly varying imaginary vector potential.
//!
//! The crate is organised bottom-up:
//!
//! - [`numeric`]: dense complex eigensolver, symmetric tridiagonal bisection,
//!   quadrature and finite-difference stencils.
//! - [`continuum`]: OBC/PBC energies and Gaussian-pinned eigenstates of the
//!   continuous model, the general-order gauge factor and a finite-difference
//!   residual.
//! - [`lattice`]: the tight-binding chain with position-dependent asymmetric
//!   hopping, its analytic spectra, the similarity map to a uniform chain and
//!   exact diagonalization.
//! - [`topology`]: PBC spectral curves, winding numbers and interior tests.
//! - [`edge`]: semi-infinite edge modes built by reduction of order.
//! - [`diagnostics`]: envelope fits, pinning position, center of mass, IPR.

pub mod continuum;
pub mod diagnostics;
pub mod edge;
pub mod error;
pub mod lattice;
pub mod numeric;
pub mod topology;
pub mod wave;

pub use continuum::ContinuumModel;
pub use error::{Error, Result};
pub use lattice::{Boundary, LatticeModel, Provenance, Spectrum, SpectrumEntry};
pub use numeric::{ComplexMatrix, EigenDecomposition, GridFunction};
pub use topology::{SpectralCurve, WindingReport};
pub use wave::{NormConvention, Sampling, WaveField};

pub use num_complex::Complex64;
