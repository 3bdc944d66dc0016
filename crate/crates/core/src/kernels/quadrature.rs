//! Adaptive Simpson quadrature for complex-valued integrands.

use num_complex::Complex64;

use crate::error::{HillError, Result};

pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Integral value with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
}

/// Adaptive Simpson on `[lo, hi]` with absolute tolerance `tol`.
///
/// Subintervals that hit `max_depth` are accepted with their local estimate;
/// if the total estimate then exceeds `tol` the call fails and reports the
/// tolerance it did reach.
pub fn adaptive_simpson<F>(f: F, lo: f64, hi: f64, tol: f64, max_depth: u32) -> Result<Quadrature>
where
    F: Fn(f64) -> Complex64,
{
    if lo == hi {
        return Ok(Quadrature { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    let fa = f(lo);
    let fb = f(hi);
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    let whole = simpson(lo, hi, fa, fm, fb);
    let mut acc = Accum { value: Complex64::new(0.0, 0.0), error: 0.0 };
    recurse(&f, lo, hi, fa, fm, fb, whole, tol, max_depth, &mut acc);
    if acc.error > tol.max(1e-15 * acc.value.norm()) * 10.0 || !acc.value.re.is_finite() || !acc.value.im.is_finite() {
        return Err(HillError::Quadrature { lo, hi, achieved: acc.error, requested: tol });
    }
    Ok(Quadrature { value: acc.value, error: acc.error })
}

/// Real-valued convenience wrapper.
pub fn adaptive_simpson_real<F>(f: F, lo: f64, hi: f64, tol: f64, max_depth: u32) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let q = adaptive_simpson(|x| Complex64::new(f(x), 0.0), lo, hi, tol, max_depth)?;
    Ok((q.value.re, q.error))
}

struct Accum {
    value: Complex64,
    error: f64,
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
    acc: &mut Accum,
) where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let err = delta.norm() / 15.0;
    if depth == 0 || err <= tol || (b - a).abs() < 1e-15 * (a.abs() + b.abs()) {
        acc.value += left + right + delta / 15.0;
        acc.error += err;
        return;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc);
    recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_and_oscillatory() {
        let (v, _) = adaptive_simpson_real(|x| x * x, 0.0, 3.0, 1e-12, 40).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        let q = adaptive_simpson(|x| Complex64::new(0.0, 6.0 * PI * x).exp(), 0.0, 1.0, 1e-12, 40).unwrap();
        assert!(q.value.norm() < 1e-11);
    }

    #[test]
    fn reports_failure_on_singularity() {
        let err = adaptive_simpson_real(|x| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-14, 12).unwrap_err();
        assert!(matches!(err, HillError::Quadrature { .. }));
    }
}
