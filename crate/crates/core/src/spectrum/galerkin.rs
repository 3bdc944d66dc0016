use std::f64::consts::PI;

use num_complex::Complex64;

use super::{BandIndex, BoundaryCondition, EigenPair, Method};
use crate::error::{HillError, Result};
use crate::kernels::eigen::{hermitian_eigen, HermitianMatrix};
use crate::potential::{FourierTable, Potential};

/// Gaps below this (absolute) are reported as zero with the degeneracy flag.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

/// `K = max(4·N_max, 32)`.
pub fn default_truncation(n_max: usize) -> usize {
    (4 * n_max).max(32)
}

/// Truncated operator `−d²/dx² + q` in the exponential basis.
///
/// Periodic: modes `θ_k`, `|k| <= K`, diagonal `(2kπ/a)²`. Antiperiodic:
/// modes `exp(i(2k+1)πx/a)`, `−K <= k <= K−1`, diagonal `((2k+1)π/a)²`.
/// Off-diagonal entries are `c_{k−l}` in both cases.
pub fn galerkin_matrix(coeffs: &FourierTable, bc: BoundaryCondition, k: usize) -> Result<HermitianMatrix> {
    if k == 0 {
        return Err(HillError::InvalidArgument("truncation K must be >= 1".into()));
    }
    let dim = match bc {
        BoundaryCondition::Periodic => 2 * k + 1,
        BoundaryCondition::Antiperiodic => 2 * k,
    };
    let reach = dim as i64 - 1;
    let diff: Vec<Complex64> = (-reach..=reach).map(|d| coeffs.get(d)).collect::<Result<_>>()?;
    let scale = PI / coeffs.period();
    HermitianMatrix::from_upper(dim, |i, j| {
        if i == j {
            let kk = i as f64 - k as f64;
            let freq = match bc {
                BoundaryCondition::Periodic => 2.0 * kk,
                BoundaryCondition::Antiperiodic => 2.0 * kk + 1.0,
            };
            Complex64::new((freq * scale).powi(2), 0.0)
        } else {
            diff[(i as i64 - j as i64 + reach) as usize]
        }
    })
}

/// Galerkin eigenvalues organised by band.
#[derive(Debug, Clone)]
pub struct BandSpectrum {
    pub bc: BoundaryCondition,
    pub period: f64,
    pub truncation: usize,
    /// mean of `q`, already added back to every eigenvalue
    pub shift: f64,
    /// lowest periodic eigenvalue `λ₀` (periodic only)
    pub ground_state: Option<f64>,
    /// pairs for `m = 0..=m_max`
    pub pairs: Vec<EigenPair>,
    /// unit eigenvectors of each pair, lower edge first, in the truncated basis
    pub vectors: Vec<[Vec<Complex64>; 2]>,
}

impl BandSpectrum {
    pub fn pair(&self, m: usize) -> Option<&EigenPair> {
        self.pairs.get(m)
    }

    /// All computed eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.ground_state.into_iter().collect();
        for p in &self.pairs {
            v.push(p.lower);
            v.push(p.upper);
        }
        v
    }
}

/// Band edges for `m = 0..=m_max` from the truncated eigenproblem.
///
/// Eigenvalues are taken in ascending order (ground state first for periodic
/// conditions) and each pair is polished by a Rayleigh–Ritz step on the span
/// of its two eigenvectors, which resolves gaps far below the absolute
/// accuracy of the full eigensolve.
pub fn band_spectrum(
    q: &Potential,
    bc: BoundaryCondition,
    m_max: usize,
    truncation: Option<usize>,
) -> Result<BandSpectrum> {
    let a = q.period();
    let n_max = BandIndex::new(bc, m_max, a).n;
    let k = truncation.unwrap_or_else(|| default_truncation(n_max));
    if k < 2 * n_max + 8 {
        return Err(HillError::InvalidArgument(format!(
            "truncation K = {k} too small for N_max = {n_max} (need K >= {})",
            2 * n_max + 8
        )));
    }
    let (qn, shift) = q.normalize_mean();
    let table = qn.fourier_table(2 * k)?;
    let h = galerkin_matrix(&table, bc, k)?;
    let eig = hermitian_eigen(&h)?;

    let offset = usize::from(bc == BoundaryCondition::Periodic);
    let ground_state = (bc == BoundaryCondition::Periodic).then(|| eig.values[0] + shift);
    let mut pairs = Vec::with_capacity(m_max + 1);
    let mut vectors = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let band = BandIndex::new(bc, m, a);
        let window = band.window(a);
        let inside = eig.values.iter().filter(|&&v| (v - band.center).abs() < window).count();
        if inside > 2 {
            return Err(HillError::BandAssignment {
                m,
                detail: format!("{inside} eigenvalues within {window:.6e} of centre {:.6e}", band.center),
            });
        }
        let (i1, i2) = (offset + 2 * m, offset + 2 * m + 1);
        let (lo, hi, z1, z2) = ritz_pair(&h, band.center, &eig.vectors[i1], &eig.vectors[i2]);
        let isolated = (lo - band.center).abs() < window && (hi - band.center).abs() < window;
        let threshold = DEGENERACY_THRESHOLD.max(1e-15 * band.center);
        pairs.push(EigenPair::new(band, lo + shift, hi + shift, Method::Galerkin, threshold, isolated));
        vectors.push([z1, z2]);
    }
    Ok(BandSpectrum { bc, period: a, truncation: k, shift, ground_state, pairs, vectors })
}

/// Rayleigh–Ritz on `span{z1, z2}` with the matrix shifted by `sigma`.
fn ritz_pair(
    h: &HermitianMatrix,
    sigma: f64,
    z1: &[Complex64],
    z2: &[Complex64],
) -> (f64, f64, Vec<Complex64>, Vec<Complex64>) {
    let shifted = |v: &[Complex64]| -> Vec<Complex64> {
        h.mul_vec(v).into_iter().zip(v).map(|(hv, x)| hv - x * sigma).collect()
    };
    let dot = |u: &[Complex64], v: &[Complex64]| -> Complex64 { u.iter().zip(v).map(|(a, b)| a.conj() * b).sum() };
    let s1 = shifted(z1);
    let s2 = shifted(z2);
    let h11 = dot(z1, &s1).re;
    let h22 = dot(z2, &s2).re;
    let h12 = dot(z1, &s2);
    let mean = 0.5 * (h11 + h22);
    let half = 0.5 * (h22 - h11);
    let radius = half.hypot(h12.norm());
    let lo = sigma + mean - radius;
    let hi = sigma + mean + radius;
    if radius == 0.0 || h12.norm() == 0.0 {
        let (a, b) = if h11 <= h22 { (z1, z2) } else { (z2, z1) };
        return (lo, hi, a.to_vec(), b.to_vec());
    }
    // eigenvector of [[h11, h12], [conj h12, h22]] for the lower value
    let (c, s) = {
        let v1 = h12;
        // (h11 − μ) v1 + h12 v2 = 0 with h11 − μ = radius − half
        let v2 = if half >= 0.0 { -h12.norm_sqr() / (radius + half) } else { half - radius };
        let v2 = Complex64::new(v2, 0.0);
        let nrm = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
        (v1 / nrm, v2 / nrm)
    };
    let lower: Vec<Complex64> = z1.iter().zip(z2).map(|(a, b)| a * c + b * s).collect();
    let upper: Vec<Complex64> = z1.iter().zip(z2).map(|(a, b)| -a * s.conj() + b * c.conj()).collect();
    (lo, hi, lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cz(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn free_matrix_is_diagonal() {
        let t = Potential::zero(PI).fourier_table(4).unwrap();
        let h = galerkin_matrix(&t, BoundaryCondition::Periodic, 2).unwrap();
        let diag: Vec<f64> = (0..5).map(|i| h.get(i, i).re).collect();
        for (d, e) in diag.iter().zip([16.0, 4.0, 0.0, 4.0, 16.0]) {
            assert!((d - e).abs() < 1e-12);
        }
        assert!((0..5).all(|i| (0..5).all(|j| i == j || h.get(i, j) == cz(0.0))));
    }

    #[test]
    fn single_harmonic_fills_first_off_diagonal() {
        let t = Potential::mathieu(0.3, PI).fourier_table(8).unwrap();
        let h = galerkin_matrix(&t, BoundaryCondition::Antiperiodic, 3).unwrap();
        for i in 0..6usize {
            for j in 0..6 {
                let expect = if i.abs_diff(j) == 1 { 0.3 } else { 0.0 };
                if i != j {
                    assert_eq!(h.get(i, j), cz(expect));
                }
            }
        }
        assert!((h.get(0, 0).re - 25.0).abs() < 1e-12);
        assert!((h.get(3, 3).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ritz_pair_recovers_two_by_two() {
        let h = HermitianMatrix::from_upper(2, |i, j| match (i, j) {
            (0, 0) => cz(1.0),
            (1, 1) => cz(3.0),
            _ => Complex64::new(0.0, 1.0),
        })
        .unwrap();
        let e1 = vec![cz(1.0), cz(0.0)];
        let e2 = vec![cz(0.0), cz(1.0)];
        let (lo, hi, z1, z2) = ritz_pair(&h, 2.0, &e1, &e2);
        assert!((lo - (2.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((hi - (2.0 + 2f64.sqrt())).abs() < 1e-14);
        for (z, lam) in [(z1, lo), (z2, hi)] {
            let hz = h.mul_vec(&z);
            let r: f64 = hz.iter().zip(&z).map(|(a, b)| (a - b * lam).norm_sqr()).sum();
            assert!(r.sqrt() < 1e-14);
        }
    }

    #[test]
    fn truncation_precondition() {
        let q = Potential::zero(1.0);
        assert!(matches!(
            band_spectrum(&q, BoundaryCondition::Periodic, 10, Some(20)),
            Err(HillError::InvalidArgument(_))
        ));
    }
}
