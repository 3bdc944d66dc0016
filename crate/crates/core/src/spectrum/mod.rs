//! Periodic and antiperiodic spectra: Fourier–Galerkin truncation,
//! Floquet-discriminant shooting, and the eigenfunction mode split.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

mod galerkin;
mod modes;
mod shooting;

pub use galerkin::{band_spectrum, default_truncation, galerkin_matrix, BandSpectrum, DEGENERACY_THRESHOLD};
pub use modes::{mode_decomposition, ModeDecomposition};
pub use shooting::{floquet_discriminant, refine_ground_state, refine_pair_shooting, refine_spectrum, DiscriminantSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Periodic,
    Antiperiodic,
}

impl BoundaryCondition {
    /// `s` in `y(a) = s·y(0)`.
    pub fn sign(self) -> f64 {
        match self {
            BoundaryCondition::Periodic => 1.0,
            BoundaryCondition::Antiperiodic => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Antiperiodic => "antiperiodic",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One band pair: `N = 2m+2` (periodic) or `N = 2m+1` (antiperiodic),
/// unperturbed centre `N²π²/a²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandIndex {
    pub bc: BoundaryCondition,
    pub m: usize,
    pub n: usize,
    pub center: f64,
}

impl BandIndex {
    pub fn new(bc: BoundaryCondition, m: usize, period: f64) -> Self {
        let n = match bc {
            BoundaryCondition::Periodic => 2 * m + 2,
            BoundaryCondition::Antiperiodic => 2 * m + 1,
        };
        let center = (n as f64 * PI / period).powi(2);
        Self { bc, m, n, center }
    }

    /// Half the distance to the neighbouring centre of the same parity,
    /// rounded up to `(2N−1)π²/a²`.
    pub fn window(&self, period: f64) -> f64 {
        (2 * self.n - 1) as f64 * (PI / period).powi(2)
    }

    /// Positions of the two principal modes in the truncated basis of
    /// half-width `k`: `(positive frequency, negative frequency)`.
    pub fn principal_positions(&self, k: usize) -> (usize, usize) {
        let m = self.m;
        match self.bc {
            BoundaryCondition::Periodic => (k + m + 1, k - (m + 1)),
            BoundaryCondition::Antiperiodic => (k + m, k - m - 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Galerkin,
    Shooting,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Galerkin => "galerkin",
            Method::Shooting => "shooting",
        }
    }
}

/// Lower and upper edge of one instability interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub band: BandIndex,
    pub lower: f64,
    pub upper: f64,
    pub gap: f64,
    pub method: Method,
    /// gap below the method's resolution; reported as exactly zero
    pub degenerate: bool,
    /// both eigenvalues lie inside the band's window around its centre
    pub isolated: bool,
}

impl EigenPair {
    pub(crate) fn new(band: BandIndex, lower: f64, upper: f64, method: Method, threshold: f64, isolated: bool) -> Self {
        let (lower, upper) = if lower <= upper { (lower, upper) } else { (upper, lower) };
        let gap = upper - lower;
        if gap < threshold {
            let mid = 0.5 * (lower + upper);
            Self { band, lower: mid, upper: mid, gap: 0.0, method, degenerate: true, isolated }
        } else {
            Self { band, lower, upper, gap, method, degenerate: false, isolated }
        }
    }
}
