//! Dormand–Prince 5(4) integration for the linear second-order equation
//! `y'' = (q(x) - λ) y`.
//!
//! The step controller bounds the local error per unit step, so the sum of
//! accepted local errors over the whole span stays below `tol`. Steps never
//! cross a breakpoint of the potential.

use crate::error::{HillError, Result};
use crate::potential::Potential;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MAX_STEPS: usize = 2_000_000;

// Dormand–Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Point on a solution trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState {
    pub x: f64,
    pub y: f64,
    pub yp: f64,
}

impl OdeState {
    pub fn new(x: f64, y: f64, yp: f64) -> Self {
        Self { x, y, yp }
    }
}

/// Transfer (monodromy) matrix over one period:
/// columns are `(y1, y1')` and `(y2, y2')` for the canonical fundamental system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monodromy {
    pub y1: f64,
    pub y1p: f64,
    pub y2: f64,
    pub y2p: f64,
}

impl Monodromy {
    pub fn trace(&self) -> f64 {
        self.y1 + self.y2p
    }

    /// `det(M - s I)`; equals `1 - s·tr M + s²` when `det M = 1`, but is
    /// evaluated entrywise so that it stays well conditioned near `M = sI`.
    pub fn shifted_det(&self, s: f64) -> f64 {
        (self.y1 - s) * (self.y2p - s) - self.y2 * self.y1p
    }

    pub fn det(&self) -> f64 {
        self.y1 * self.y2p - self.y2 * self.y1p
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(1e-13..=1e-6).contains(&tol) {
        return Err(HillError::InvalidArgument(format!(
            "ODE tolerance {tol:e} outside [1e-13, 1e-6]"
        )));
    }
    Ok(())
}

/// Advances one solution of `y'' = (q - λ) y` from `init.x` to `x_end`.
pub fn integrate_ode(q: &Potential, lambda: f64, init: OdeState, x_end: f64, tol: f64) -> Result<OdeState> {
    check_tol(tol)?;
    if !(init.x.is_finite() && init.y.is_finite() && init.yp.is_finite() && x_end.is_finite()) {
        return Err(HillError::InvalidArgument("non-finite ODE state".into()));
    }
    let [y, yp] = integrate_system(q, lambda, [init.y, init.yp], init.x, x_end, tol)?;
    Ok(OdeState { x: x_end, y, yp })
}

/// Integrates both canonical solutions over `[0, a]`.
pub fn monodromy(q: &Potential, lambda: f64, tol: f64) -> Result<Monodromy> {
    check_tol(tol)?;
    let [y1, y1p, y2, y2p] = integrate_system(q, lambda, [1.0, 0.0, 0.0, 1.0], 0.0, q.period(), tol)?;
    Ok(Monodromy { y1, y1p, y2, y2p })
}

/// Integrates `D` independent solutions packed as `(y, y')` pairs.
fn integrate_system<const D: usize>(
    q: &Potential,
    lambda: f64,
    y0: [f64; D],
    x0: f64,
    x1: f64,
    tol: f64,
) -> Result<[f64; D]> {
    let span = (x1 - x0).abs();
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = (x1 - x0).signum();
    let period = q.period();

    // split points strictly inside the span, in travel order
    let mut stops: Vec<f64> = q
        .breakpoints_between(x0.min(x1), x0.max(x1))
        .into_iter()
        .filter(|&b| (b - x0).abs() > 1e-15 * period && (b - x1).abs() > 1e-15 * period)
        .collect();
    if dir < 0.0 {
        stops.reverse();
    }
    stops.push(x1);

    let has_jumps = q.has_breakpoints();
    // `q(x) − λ`; inside a segment q is smooth, so clamp to keep a jump at an
    // end from ever being sampled
    let coef = |x: f64, lo: f64, hi: f64| -> f64 {
        let xe = if has_jumps { x.clamp(lo, hi) } else { x };
        q.eval(xe) - lambda
    };

    let min_step = 1e-14 * period;
    let omega = (lambda.abs() + q.sup_abs()).sqrt().max(1.0 / period);
    let mut h = (0.05 / omega).min(span);
    let mut x = x0;
    let mut y = y0;
    let mut steps = 0usize;

    for &stop in &stops {
        // `x` lies on the grid defined by `stops`; evaluation inside (x, stop) only
        let seg_start = x;
        let pad = 1e-13 * period;
        let (lo, hi) = if dir > 0.0 { (seg_start + pad, stop - pad) } else { (stop + pad, seg_start - pad) };
        let seg_coef = |xx: f64| coef(xx, lo.min(hi), hi.max(lo));
        let mut c_here = seg_coef(x);
        loop {
            let remaining = (stop - x) * dir;
            if remaining <= 1e-15 * period.max(seg_start.abs()) {
                x = stop;
                break;
            }
            let mut step = h.min(remaining);
            let last = step >= remaining;
            if last {
                step = remaining;
            }
            let signed = dir * step;
            let (y_new, err, c_end) = dopri_step(&seg_coef, x, &y, signed, c_here);

            let scale = y.iter().zip(&y_new).map(|(a, b)| a.abs().max(b.abs())).fold(1.0, f64::max);
            // error per unit step relative to the whole span
            let allowed = tol * scale * (step / span);
            let ratio = err / allowed;
            if ratio <= 1.0 || step <= min_step {
                if !ratio.is_finite() {
                    return Err(HillError::Stiffness { x, step });
                }
                x = if last { stop } else { x + signed };
                y = y_new;
                c_here = c_end;
                steps += 1;
                if steps > MAX_STEPS {
                    return Err(HillError::Stiffness { x, step });
                }
                let factor = if ratio == 0.0 { MAX_FACTOR } else { (SAFETY * ratio.powf(-0.25)).clamp(MIN_FACTOR, MAX_FACTOR) };
                if !last {
                    h = step * factor;
                }
                if last {
                    break;
                }
            } else {
                let factor = (SAFETY * ratio.powf(-0.25)).clamp(MIN_FACTOR, 1.0);
                h = step * factor;
                if h < min_step {
                    return Err(HillError::Stiffness { x, step: h });
                }
            }
        }
    }
    Ok(y)
}

/// One Dormand–Prince step for `y'' = c(x) y`, given `c0 = c(x)`.
/// Returns the fifth-order solution, the max-norm of the embedded error
/// estimate and `c(x + h)`, which the next step reuses.
fn dopri_step<const D: usize, F>(c: &F, x: f64, y: &[f64; D], h: f64, c0: f64) -> ([f64; D], f64, f64)
where
    F: Fn(f64) -> f64,
{
    let f = |cv: f64, y: &[f64; D]| -> [f64; D] {
        let mut out = [0.0; D];
        for i in (0..D).step_by(2) {
            out[i] = y[i + 1];
            out[i + 1] = cv * y[i];
        }
        out
    };
    let comb = |coeffs: &[(f64, &[f64; D])]| -> [f64; D] {
        let mut out = *y;
        for (w, k) in coeffs {
            for i in 0..D {
                out[i] += h * w * k[i];
            }
        }
        out
    };

    let c_end = c(x + h);
    let k1 = f(c0, y);
    let k2 = f(c(x + C2 * h), &comb(&[(A21, &k1)]));
    let k3 = f(c(x + C3 * h), &comb(&[(A31, &k1), (A32, &k2)]));
    let k4 = f(c(x + C4 * h), &comb(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(c(x + C5 * h), &comb(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(c_end, &comb(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
    let y_new = comb(&[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(c_end, &y_new);

    let mut err: f64 = 0.0;
    for i in 0..D {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        err = err.max(e.abs());
    }
    (y_new, err, c_end)
}
