//! Numerical lab for Hill's equation `y'' + (λ − q(x)) y = 0` with a real
//! periodic potential `q` of period `a`.
//!
//! The crate computes band edges of the periodic and antiperiodic problems
//! by a truncated Fourier (Galerkin) eigensolver, refines them by shooting on
//! the Floquet discriminant, and compares instability-interval widths with
//! perturbative predictions built from the Fourier coefficients of `q`.

pub mod cli;
pub mod error;
pub mod identities;
pub mod kernels;
pub mod perturbation;
pub mod potential;
pub mod spectrum;

pub use error::{HillError, Result};
pub use potential::{CumulativeProfile, FourierTable, Potential, PotentialForm, ProfileKind, RhoValue};
pub use spectrum::{
    band_spectrum, floquet_discriminant, galerkin_matrix, mode_decomposition, refine_pair_shooting, BandIndex,
    BandSpectrum, BoundaryCondition, EigenPair, Method, ModeDecomposition,
};
