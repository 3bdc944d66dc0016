use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BandIndex, BoundaryCondition};
use crate::error::{HillError, Result};

/// Split of a band eigenfunction into its two principal modes and the rest:
/// `Ψ = u·e^{iNπx/a} + v·e^{−iNπx/a} + h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeDecomposition {
    pub u: Complex64,
    pub v: Complex64,
    pub h_norm: f64,
    /// `Σ |components of h|`, an upper bound for `sup |h|`
    pub h_sup: f64,
}

impl ModeDecomposition {
    /// `|u|² + |v|² − 1`.
    pub fn principal_defect(&self) -> f64 {
        self.u.norm_sqr() + self.v.norm_sqr() - 1.0
    }
}

/// Decomposes a unit eigenvector given in the truncated Galerkin basis.
/// The half-width is read off the vector length.
pub fn mode_decomposition(eigvec: &[Complex64], band: &BandIndex) -> Result<ModeDecomposition> {
    let len = eigvec.len();
    let k = match band.bc {
        BoundaryCondition::Periodic if len % 2 == 1 => (len - 1) / 2,
        BoundaryCondition::Antiperiodic if len.is_multiple_of(2) => len / 2,
        _ => {
            return Err(HillError::InvalidArgument(format!(
                "vector length {len} does not match a {} basis",
                band.bc
            )))
        }
    };
    if band.m + 1 > k {
        return Err(HillError::InvalidArgument(format!("band m = {} outside a basis of half-width {k}", band.m)));
    }
    let (ip, im) = band.principal_positions(k);
    let (mut h_sq, mut h_sup) = (0.0, 0.0);
    for (i, z) in eigvec.iter().enumerate() {
        if i != ip && i != im {
            h_sq += z.norm_sqr();
            h_sup += z.norm();
        }
    }
    Ok(ModeDecomposition { u: eigvec[ip], v: eigvec[im], h_norm: h_sq.sqrt(), h_sup })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(len: usize, at: &[(usize, Complex64)]) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        for &(i, z) in at {
            v[i] = z;
        }
        v
    }

    #[test]
    fn pure_principal_mode() {
        let band = BandIndex::new(BoundaryCondition::Periodic, 2, 1.0);
        // K = 5: θ_3 sits at position 8
        let v = unit(11, &[(8, Complex64::new(1.0, 0.0))]);
        let d = mode_decomposition(&v, &band).unwrap();
        assert_eq!(d.u, Complex64::new(1.0, 0.0));
        assert_eq!(d.v, Complex64::new(0.0, 0.0));
        assert_eq!(d.h_norm, 0.0);
    }

    #[test]
    fn symmetric_combination() {
        let band = BandIndex::new(BoundaryCondition::Antiperiodic, 1, 1.0);
        let r = Complex64::new(0.5f64.sqrt(), 0.0);
        // K = 4: modes k = 1 and k = −2 at positions 5 and 2
        let v = unit(8, &[(5, r), (2, r)]);
        let d = mode_decomposition(&v, &band).unwrap();
        assert!((d.u - r).norm() < 1e-15 && (d.v - r).norm() < 1e-15);
        assert!(d.principal_defect().abs() < 1e-15);
    }

    #[test]
    fn remainder_norms() {
        let band = BandIndex::new(BoundaryCondition::Periodic, 0, 1.0);
        let v = unit(5, &[(3, Complex64::new(0.8, 0.0)), (0, Complex64::new(0.0, 0.6))]);
        let d = mode_decomposition(&v, &band).unwrap();
        assert!((d.h_norm - 0.6).abs() < 1e-15 && (d.h_sup - 0.6).abs() < 1e-15);
        assert!(mode_decomposition(&v[..4], &band).is_err());
    }
}
