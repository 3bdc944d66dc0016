use serde::{Deserialize, Serialize};

use super::{BandIndex, BandSpectrum, BoundaryCondition, EigenPair, Method};
use crate::error::{HillError, Result};
use crate::kernels::ode::{monodromy, Monodromy};
use crate::kernels::roots::find_root_with;
use crate::potential::Potential;

const MAX_DOUBLINGS: usize = 6;

/// `D(λ) = y₁(a; λ) + y₂'(a; λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantSample {
    pub lambda: f64,
    pub d: f64,
}

pub fn floquet_discriminant(q: &Potential, lambda: f64, tol: f64) -> Result<DiscriminantSample> {
    let m = monodromy(q, lambda, tol)?;
    Ok(DiscriminantSample { lambda, d: m.trace() })
}

fn ode_tol(tol: f64) -> f64 {
    tol.clamp(1e-13, 1e-6)
}

/// Evaluates the monodromy matrix and records `(λ, D(λ))` for diagnostics.
struct Shooter<'a> {
    q: &'a Potential,
    tol: f64,
    samples: Vec<(f64, f64)>,
}

impl<'a> Shooter<'a> {
    fn new(q: &'a Potential, tol: f64) -> Self {
        Self { q, tol: ode_tol(tol), samples: Vec::new() }
    }

    fn monodromy(&mut self, lambda: f64) -> Result<Monodromy> {
        let m = monodromy(self.q, lambda, self.tol)?;
        self.samples.push((lambda, m.trace()));
        Ok(m)
    }

    /// `det(M − sI) = 2 − sD`: negative exactly inside an instability interval.
    fn edge_fn(&mut self, s: f64, lambda: f64) -> Result<f64> {
        Ok(self.monodromy(lambda)?.shifted_det(s))
    }

    /// `y₂(a; λ)`, whose zero (a Dirichlet eigenvalue) lies in the closure of
    /// every instability interval.
    fn dirichlet_fn(&mut self, lambda: f64) -> Result<f64> {
        Ok(self.monodromy(lambda)?.y2)
    }

    fn failure(self, m: usize, detail: String) -> HillError {
        HillError::Refinement { m, detail, samples: self.samples }
    }
}

/// Finds a root of `f` in `[from, to]`, first pushing `from` outward (away
/// from `to`) until `f(from)` has the sign `want`.
fn expand_and_solve(
    sh: &mut Shooter<'_>,
    f: &mut dyn FnMut(&mut Shooter<'_>, f64) -> Result<f64>,
    from: f64,
    to: f64,
    mut width: f64,
    want_positive: bool,
    root_tol: f64,
) -> Result<Option<f64>> {
    let dir = (from - to).signum();
    let mut x = from;
    for _ in 0..=MAX_DOUBLINGS {
        let v = f(sh, x)?;
        if (v > 0.0) == want_positive || v == 0.0 {
            let root = find_root_with(|l| f(sh, l), x, to, root_tol)?;
            return Ok(Some(root));
        }
        width *= 2.0;
        x = from + dir * width;
    }
    Ok(None)
}

/// Refines the lowest periodic eigenvalue from a Galerkin seed.
pub fn refine_ground_state(q: &Potential, seed: f64, tol: f64) -> Result<f64> {
    let mut sh = Shooter::new(q, tol);
    let w = 1e-6 * seed.abs().max(1.0) + 10.0 * tol;
    let mut f = |s: &mut Shooter<'_>, l: f64| s.edge_fn(1.0, l);
    // below λ₀ the solutions grow (f < 0); just above it f > 0
    let mut hi = seed + w;
    let mut width = w;
    for _ in 0..=MAX_DOUBLINGS {
        if f(&mut sh, hi)? > 0.0 {
            if let Some(r) = expand_and_solve(&mut sh, &mut f, seed - w, hi, w, false, tol)? {
                return Ok(r);
            }
            break;
        }
        width *= 2.0;
        hi = seed + width;
    }
    Err(sh.failure(0, format!("could not bracket the ground state near {seed}")))
}

/// Refines a Galerkin pair by shooting on `det(M ∓ I)`.
///
/// If the discriminant test puts the pair's midpoint inside an instability
/// interval, each edge is bracketed on its own side and solved with Brent's
/// method. Otherwise the gap is below what the discriminant can resolve and
/// both edges are placed at the Dirichlet eigenvalue inside the window,
/// which is a simple root and therefore well conditioned.
pub fn refine_pair_shooting(q: &Potential, pair: &EigenPair, tol: f64) -> Result<EigenPair> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(HillError::InvalidArgument(format!("shooting tolerance must be positive, got {tol}")));
    }
    let band = pair.band;
    let s = band.bc.sign();
    let mut sh = Shooter::new(q, tol);
    let mid = 0.5 * (pair.lower + pair.upper);
    let w = pair.gap + 10.0 * tol;
    let mut edge = |sh: &mut Shooter<'_>, l: f64| sh.edge_fn(s, l);

    if edge(&mut sh, mid)? < 0.0 {
        let lower = expand_and_solve(&mut sh, &mut edge, pair.lower - w, mid, w, true, tol)?;
        let upper = expand_and_solve(&mut sh, &mut edge, pair.upper + w, mid, w, true, tol)?;
        return match (lower, upper) {
            (Some(lo), Some(hi)) => Ok(finish(band, lo, hi, tol, pair.isolated)),
            _ => Err(sh.failure(band.m, format!("edges of the gap near {mid} could not be bracketed"))),
        };
    }

    let dir = |sh: &mut Shooter<'_>, l: f64| sh.dirichlet_fn(l);
    let mut width = w;
    for _ in 0..=MAX_DOUBLINGS {
        let (lo, hi) = (mid - width, mid + width);
        let (flo, fhi) = (dir(&mut sh, lo)?, dir(&mut sh, hi)?);
        if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
            let r = find_root_with(|l| dir(&mut sh, l), lo, hi, tol)?;
            return Ok(finish(band, r, r, tol, pair.isolated));
        }
        width *= 2.0;
    }
    Err(sh.failure(band.m, format!("no Dirichlet root near the degenerate pair at {mid}")))
}

fn finish(band: BandIndex, lo: f64, hi: f64, tol: f64, isolated: bool) -> EigenPair {
    EigenPair::new(band, lo, hi, Method::Shooting, tol, isolated)
}

/// Shooting counterpart of a whole Galerkin spectrum.
pub fn refine_spectrum(q: &Potential, spectrum: &BandSpectrum, tol: f64) -> Result<(Option<f64>, Vec<EigenPair>)> {
    let ground = match (spectrum.bc, spectrum.ground_state) {
        (BoundaryCondition::Periodic, Some(g)) => Some(refine_ground_state(q, g, tol)?),
        _ => None,
    };
    let pairs = spectrum.pairs.iter().map(|p| refine_pair_shooting(q, p, tol)).collect::<Result<Vec<_>>>()?;
    Ok((ground, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_discriminant() {
        let q = Potential::zero(PI);
        let d = floquet_discriminant(&q, 4.0, 1e-12).unwrap();
        assert!((d.d - 2.0).abs() < 1e-10);
        let d = floquet_discriminant(&q, 1.0, 1e-12).unwrap();
        assert!((d.d + 2.0).abs() < 1e-10);
        let d = floquet_discriminant(&q, 2.3, 1e-12).unwrap();
        assert!((d.d - 2.0 * (2.3f64.sqrt() * PI).cos()).abs() < 1e-10);
    }

    #[test]
    fn free_pair_stays_degenerate() {
        let q = Potential::zero(PI);
        let band = BandIndex::new(BoundaryCondition::Periodic, 0, PI);
        let seed = EigenPair::new(band, 4.0 - 1e-9, 4.0 + 1e-9, Method::Galerkin, 1e-10, true);
        let p = refine_pair_shooting(&q, &seed, 1e-11).unwrap();
        assert!(p.degenerate);
        assert!((p.lower - 4.0).abs() < 1e-10);
    }

    #[test]
    fn free_root_of_discriminant() {
        // D − 2 has a double root at 4; D + 2 a double root at 9
        let q = Potential::zero(PI);
        let band = BandIndex::new(BoundaryCondition::Antiperiodic, 1, PI);
        let seed = EigenPair::new(band, 9.0, 9.0, Method::Galerkin, 1e-10, true);
        let p = refine_pair_shooting(&q, &seed, 1e-11).unwrap();
        assert!((p.upper - 9.0).abs() < 1e-10 && p.gap == 0.0);
    }

    #[test]
    fn ground_state_of_constant_potential() {
        let q = Potential::trig(1.0, &[(0, num_complex::Complex64::new(3.0, 0.0))]).unwrap();
        let g = refine_ground_state(&q, 3.0 + 1e-7, 1e-11).unwrap();
        assert!((g - 3.0).abs() < 1e-10, "{g}");
    }

    #[test]
    fn failure_carries_samples() {
        let q = Potential::zero(1.0);
        let band = BandIndex::new(BoundaryCondition::Periodic, 0, 1.0);
        // seed far from any eigenvalue: y₂(a) does not vanish nearby
        let seed = EigenPair::new(band, 50.0, 50.0, Method::Galerkin, 1e-10, true);
        match refine_pair_shooting(&q, &seed, 1e-10) {
            Err(HillError::Refinement { samples, .. }) => assert!(!samples.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
