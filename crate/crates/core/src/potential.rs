//! Periodic potentials and their Fourier-side quantities.
//!
//! Conventions: `θ_k(x) = exp(i2kπx/a)` and
//! `c_k = a⁻¹ ∫₀ᵃ q(x) exp(−i2kπx/a) dx`, so `q = Σ c_k θ_k`.
//! The partial integral `∫₀ˣ q(t) exp(−i2jπt/a) dt` is available in closed
//! form for every supported form; it drives `ρ(m)` and the cumulative
//! profiles `Q` and `G±`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HillError, Result};
use crate::kernels::quadrature::{adaptive_simpson, DEFAULT_MAX_DEPTH};
use crate::kernels::roots::golden_max;

const SYMMETRY_TOL: f64 = 1e-12;
pub const DEFAULT_RHO_GRID: usize = 1024;

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// How `q` is described on one period.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialForm {
    /// `q = Σ c_k θ_k`, sorted by `k`, one entry per index.
    TrigPolynomial(Vec<(i64, Complex64)>),
    /// Value `values[i]` on `[breakpoints[i], breakpoints[i+1])`, with
    /// `breakpoints[0] = 0` and the last breakpoint equal to the period.
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
    /// Samples at `x_i = i·a/n`, `i = 0..n`, joined linearly with periodic wrap.
    Sampled(Vec<f64>),
}

/// `Σ c_k e^{ikw}` over terms sorted by `k`, stepping the exponential by
/// multiplication instead of one `sin`/`cos` pair per term.
fn trig_sum(terms: &[(i64, Complex64)], w: f64) -> Complex64 {
    let Some(&(k0, _)) = terms.first() else {
        return cz(0.0, 0.0);
    };
    let z = Complex64::from_polar(1.0, w);
    let mut pw = Complex64::from_polar(1.0, k0 as f64 * w);
    let mut at = k0;
    let mut sum = cz(0.0, 0.0);
    for &(k, c) in terms {
        let step = k - at;
        if step > 8 {
            pw = Complex64::from_polar(1.0, k as f64 * w);
        } else {
            for _ in 0..step {
                pw *= z;
            }
        }
        at = k;
        sum += c * pw;
    }
    sum
}

/// A potential on `[0, a]`, extended periodically.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    period: f64,
    form: PotentialForm,
    real_valued: bool,
}

impl Potential {
    fn check_period(period: f64) -> Result<()> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(HillError::InvalidPotential(format!("period must be positive, got {period}")));
        }
        Ok(())
    }

    pub fn zero(period: f64) -> Self {
        Self { period, form: PotentialForm::TrigPolynomial(Vec::new()), real_valued: true }
    }

    /// Real trigonometric polynomial; requires `c_{−k} = conj(c_k)`.
    pub fn trig(period: f64, terms: &[(i64, Complex64)]) -> Result<Self> {
        let q = Self::trig_complex(period, terms)?;
        if let PotentialForm::TrigPolynomial(t) = &q.form {
            let lookup = |k: i64| t.iter().find(|e| e.0 == k).map_or(cz(0.0, 0.0), |e| e.1);
            for &(k, c) in t {
                let defect = (lookup(-k) - c.conj()).norm();
                if defect > SYMMETRY_TOL * (1.0 + c.norm()) {
                    return Err(HillError::InvalidPotential(format!(
                        "coefficients not conjugate-symmetric at k = {k} (defect {defect:.3e})"
                    )));
                }
            }
        }
        Ok(Self { real_valued: true, ..q })
    }

    /// Trigonometric polynomial without the real-valuedness check. Only the
    /// Fourier-side operations are meaningful for complex potentials.
    pub fn trig_complex(period: f64, terms: &[(i64, Complex64)]) -> Result<Self> {
        Self::check_period(period)?;
        let mut t: Vec<(i64, Complex64)> = Vec::with_capacity(terms.len());
        for &(k, c) in terms {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(HillError::InvalidPotential(format!("non-finite coefficient at k = {k}")));
            }
            match t.iter_mut().find(|e| e.0 == k) {
                Some(e) => e.1 += c,
                None => t.push((k, c)),
            }
        }
        t.retain(|e| e.1 != cz(0.0, 0.0));
        t.sort_by_key(|e| e.0);
        Ok(Self { period, form: PotentialForm::TrigPolynomial(t), real_valued: false })
    }

    pub fn piecewise(period: f64, breakpoints: &[f64], values: &[f64]) -> Result<Self> {
        Self::check_period(period)?;
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return Err(HillError::InvalidPotential(format!(
                "need one more breakpoint than values ({} vs {})",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints[0] != 0.0 || (breakpoints[breakpoints.len() - 1] - period).abs() > 1e-12 * period {
            return Err(HillError::InvalidPotential("breakpoints must run from 0 to the period".into()));
        }
        if breakpoints.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
            return Err(HillError::InvalidPotential("breakpoints must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(HillError::InvalidPotential("non-finite piece value".into()));
        }
        let mut bp = breakpoints.to_vec();
        *bp.last_mut().unwrap() = period;
        Ok(Self {
            period,
            form: PotentialForm::PiecewiseConstant { breakpoints: bp, values: values.to_vec() },
            real_valued: true,
        })
    }

    pub fn sampled(period: f64, samples: &[f64]) -> Result<Self> {
        Self::check_period(period)?;
        if samples.len() < 2 {
            return Err(HillError::InvalidPotential("need at least two samples".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(HillError::InvalidPotential("non-finite sample".into()));
        }
        Ok(Self { period, form: PotentialForm::Sampled(samples.to_vec()), real_valued: true })
    }

    /// `2γ cos(2πx/a)`; with `a = π` this is the Mathieu potential `2γ cos 2x`.
    pub fn mathieu(gamma: f64, period: f64) -> Self {
        Self::single_harmonic(1, gamma, period)
    }

    /// `γ θ_N + γ θ_{−N} = 2γ cos(2Nπx/a)`.
    pub fn single_harmonic(n: i64, gamma: f64, period: f64) -> Self {
        let n = n.abs();
        let terms = if gamma == 0.0 || n == 0 { vec![] } else { vec![(-n, cz(gamma, 0.0)), (n, cz(gamma, 0.0))] };
        Self { period, form: PotentialForm::TrigPolynomial(terms), real_valued: true }
    }

    /// Odd square wave: `γ` on `[0, a/2)`, `−γ` on `[a/2, a)`.
    pub fn square(gamma: f64, period: f64) -> Self {
        Self {
            period,
            form: PotentialForm::PiecewiseConstant {
                breakpoints: vec![0.0, 0.5 * period, period],
                values: vec![gamma, -gamma],
            },
            real_valued: true,
        }
    }

    /// Cosine series with `c_k = c_{−k} = k^{−α}` for `1 <= k <= harmonics`.
    pub fn harmonic_decay(alpha: f64, harmonics: usize, period: f64) -> Self {
        let mut terms = Vec::with_capacity(2 * harmonics);
        for k in (1..=harmonics as i64).rev() {
            terms.push((-k, cz((k as f64).powf(-alpha), 0.0)));
        }
        for k in 1..=harmonics as i64 {
            terms.push((k, cz((k as f64).powf(-alpha), 0.0)));
        }
        Self { period, form: PotentialForm::TrigPolynomial(terms), real_valued: true }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn form(&self) -> &PotentialForm {
        &self.form
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn is_trig_polynomial(&self) -> bool {
        matches!(self.form, PotentialForm::TrigPolynomial(_))
    }

    /// Largest `|k|` present, for trigonometric polynomials.
    pub fn degree(&self) -> Option<usize> {
        match &self.form {
            PotentialForm::TrigPolynomial(t) => Some(t.iter().map(|e| e.0.unsigned_abs() as usize).max().unwrap_or(0)),
            _ => None,
        }
    }

    fn reduce(&self, x: f64) -> f64 {
        let r = x.rem_euclid(self.period);
        if r >= self.period {
            0.0
        } else {
            r
        }
    }

    pub fn eval_complex(&self, x: f64) -> Complex64 {
        match &self.form {
            PotentialForm::TrigPolynomial(t) => {
                trig_sum(t, 2.0 * PI * x / self.period)
            }
            _ => cz(self.eval(x), 0.0),
        }
    }

    /// `q(x)` (real part for complex trigonometric polynomials).
    pub fn eval(&self, x: f64) -> f64 {
        match &self.form {
            PotentialForm::TrigPolynomial(t) if self.real_valued => {
                // c_{−k} = conj(c_k): sum k >= 0 only
                let start = t.partition_point(|e| e.0 < 0);
                let (c0, pos) = match t.get(start) {
                    Some(&(0, c)) => (c.re, &t[start + 1..]),
                    _ => (0.0, &t[start..]),
                };
                c0 + 2.0 * trig_sum(pos, 2.0 * PI * x / self.period).re
            }
            PotentialForm::TrigPolynomial(t) => trig_sum(t, 2.0 * PI * x / self.period).re,
            PotentialForm::PiecewiseConstant { breakpoints, values } => {
                let r = self.reduce(x);
                let idx = breakpoints.partition_point(|&b| b <= r).saturating_sub(1);
                values[idx.min(values.len() - 1)]
            }
            PotentialForm::Sampled(s) => {
                let n = s.len();
                let u = self.reduce(x) / self.period * n as f64;
                let i = (u.floor() as usize).min(n - 1);
                let frac = u - i as f64;
                s[i] * (1.0 - frac) + s[(i + 1) % n] * frac
            }
        }
    }

    /// Upper bound for `sup |q|`.
    pub fn sup_abs(&self) -> f64 {
        match &self.form {
            PotentialForm::TrigPolynomial(t) => t.iter().map(|e| e.1.norm()).sum(),
            PotentialForm::PiecewiseConstant { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
            PotentialForm::Sampled(s) => s.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    fn nodes(&self) -> Vec<f64> {
        match &self.form {
            PotentialForm::TrigPolynomial(_) => vec![0.0, self.period],
            PotentialForm::PiecewiseConstant { breakpoints, .. } => breakpoints.clone(),
            PotentialForm::Sampled(s) => {
                let n = s.len();
                (0..=n).map(|i| if i == n { self.period } else { i as f64 * self.period / n as f64 }).collect()
            }
        }
    }

    pub fn has_breakpoints(&self) -> bool {
        !self.is_trig_polynomial()
    }

    /// Points in the open interval `(lo, hi)` where `q` (or its derivative)
    /// may jump, including periodic images.
    pub fn breakpoints_between(&self, lo: f64, hi: f64) -> Vec<f64> {
        if !self.has_breakpoints() || hi.is_nan() || hi <= lo {
            return Vec::new();
        }
        let nodes = self.nodes();
        let inner = &nodes[..nodes.len() - 1];
        let first = (lo / self.period).floor() as i64;
        let last = (hi / self.period).ceil() as i64;
        let mut out = Vec::new();
        for p in first..=last {
            let base = p as f64 * self.period;
            for &b in inner {
                let x = base + b;
                if x > lo && x < hi {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Mean value `c₀` (real part).
    pub fn mean(&self) -> f64 {
        match &self.form {
            PotentialForm::TrigPolynomial(t) => t.iter().find(|e| e.0 == 0).map_or(0.0, |e| e.1.re),
            PotentialForm::PiecewiseConstant { breakpoints, values } => {
                breakpoints.windows(2).zip(values).map(|(w, v)| (w[1] - w[0]) * v).sum::<f64>() / self.period
            }
            PotentialForm::Sampled(s) => s.iter().sum::<f64>() / s.len() as f64,
        }
    }

    /// Subtracts the mean; returns the mean-free potential and the removed
    /// constant (eigenvalues of the original are those of the result plus it).
    pub fn normalize_mean(&self) -> (Potential, f64) {
        let shift = self.mean();
        let form = match &self.form {
            PotentialForm::TrigPolynomial(t) => {
                PotentialForm::TrigPolynomial(t.iter().copied().filter(|e| e.0 != 0).collect())
            }
            PotentialForm::PiecewiseConstant { breakpoints, values } => PotentialForm::PiecewiseConstant {
                breakpoints: breakpoints.clone(),
                values: values.iter().map(|v| v - shift).collect(),
            },
            PotentialForm::Sampled(s) => PotentialForm::Sampled(s.iter().map(|v| v - shift).collect()),
        };
        (Potential { period: self.period, form, real_valued: self.real_valued }, shift)
    }

    /// `∫₀ˣ q(t) exp(−i2jπt/a) dt` for `x ∈ [0, a]`, in closed form.
    pub fn partial_integral(&self, x: f64, j: i64) -> Complex64 {
        let a = self.period;
        let x = x.clamp(0.0, a);
        let omega = 2.0 * PI * j as f64 / a;
        match &self.form {
            PotentialForm::TrigPolynomial(t) => t
                .iter()
                .map(|&(k, c)| {
                    if k == j {
                        c * x
                    } else {
                        let w = 2.0 * PI * (k - j) as f64 / a;
                        c * cz(0.0, w * x).exp_m1_ish() / cz(0.0, w)
                    }
                })
                .sum(),
            PotentialForm::PiecewiseConstant { breakpoints, values } => {
                let mut acc = cz(0.0, 0.0);
                for (w, &v) in breakpoints.windows(2).zip(values) {
                    if w[0] >= x {
                        break;
                    }
                    let e = w[1].min(x);
                    let len = e - w[0];
                    // ∫_{s}^{e} e^{−iωt} dt = e^{−iωs}·len·φ1(−iω·len)
                    acc += v * Complex64::from_polar(1.0, -omega * w[0]) * len * phi1(cz(0.0, -omega * len));
                }
                acc
            }
            PotentialForm::Sampled(s) => {
                let n = s.len();
                let h = a / n as f64;
                let mut acc = cz(0.0, 0.0);
                for i in 0..n {
                    let t0 = i as f64 * h;
                    if t0 >= x {
                        break;
                    }
                    let len = (x - t0).min(h);
                    let v0 = s[i];
                    let slope = (s[(i + 1) % n] - v0) / h;
                    let z = cz(0.0, -omega * len);
                    acc += Complex64::from_polar(1.0, -omega * t0) * (v0 * len * phi1(z) + slope * len * len * phi2(z));
                }
                acc
            }
        }
    }

    /// Fourier coefficient `c_k` with an error estimate (zero for closed forms).
    pub fn fourier_coefficient_with_error(&self, k: i64) -> Result<(Complex64, f64)> {
        let a = self.period;
        match &self.form {
            PotentialForm::TrigPolynomial(t) => Ok((t.iter().find(|e| e.0 == k).map_or(cz(0.0, 0.0), |e| e.1), 0.0)),
            PotentialForm::PiecewiseConstant { .. } => {
                let c = self.partial_integral(a, k) / a;
                // cancellation leaves roundoff where the coefficient vanishes
                let floor = 64.0 * f64::EPSILON * self.sup_abs();
                Ok((if c.norm() <= floor { cz(0.0, 0.0) } else { c }, floor))
            }
            PotentialForm::Sampled(_) => {
                let omega = 2.0 * PI * k as f64 / a;
                let scale = self.sup_abs().max(f64::MIN_POSITIVE);
                let nodes = self.nodes();
                let seg_tol = 1e-12 * scale / (nodes.len() - 1) as f64;
                let mut value = cz(0.0, 0.0);
                let mut err = 0.0;
                for w in nodes.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    let left = self.eval(lo);
                    let right = self.eval_left_limit(hi);
                    let len = hi - lo;
                    let f = |t: f64| {
                        let v = left + (right - left) * (t - lo) / len;
                        v * Complex64::from_polar(1.0, -omega * t)
                    };
                    let qd = adaptive_simpson(f, lo, hi, seg_tol * len, DEFAULT_MAX_DEPTH)?;
                    value += qd.value;
                    err += qd.error;
                }
                let rel = err / (a * scale);
                if rel > 1e-10 {
                    return Err(HillError::Quadrature { lo: 0.0, hi: a, achieved: rel, requested: 1e-10 });
                }
                Ok((value / a, err / a))
            }
        }
    }

    fn eval_left_limit(&self, x: f64) -> f64 {
        match &self.form {
            PotentialForm::Sampled(s) => {
                let n = s.len();
                let u = (x / self.period * n as f64).round() as usize;
                s[u % n]
            }
            _ => self.eval(x),
        }
    }

    pub fn fourier_coefficient(&self, k: i64) -> Result<Complex64> {
        self.fourier_coefficient_with_error(k).map(|r| r.0)
    }

    /// Coefficient table for `|k| <= half_width`, with `c₀` set to zero.
    pub fn fourier_table(&self, half_width: usize) -> Result<FourierTable> {
        let exact = match self.degree() {
            Some(d) => d <= half_width,
            None => false,
        };
        let mut coeffs = Vec::with_capacity(2 * half_width + 1);
        for k in -(half_width as i64)..=(half_width as i64) {
            coeffs.push(if k == 0 { cz(0.0, 0.0) } else { self.fourier_coefficient(k)? });
        }
        Ok(FourierTable::new(self.period, half_width, coeffs, exact))
    }

    /// `ρ(m)` for the periodic band `N = 2m+2`.
    pub fn rho(&self, m: usize, grid_points: usize) -> Result<RhoValue> {
        self.rho_at(m, 2 * m as i64 + 2, grid_points)
    }

    /// `sup_x |∫₀ˣ q(t) exp(∓i2Nπt/a) dt|`, maximized over both signs.
    /// Uniform grid search followed by golden-section refinement around the
    /// best grid point.
    pub fn rho_at(&self, m: usize, n: i64, grid_points: usize) -> Result<RhoValue> {
        if grid_points < 64 {
            return Err(HillError::InvalidArgument(format!("rho grid needs >= 64 points, got {grid_points}")));
        }
        let a = self.period;
        let h = a / grid_points as f64;
        let mut best = RhoValue { m, n, value: 0.0, argmax_x: 0.0 };
        for j in [n, -n] {
            let modulus = |x: f64| self.partial_integral(x, j).norm();
            let (mut bi, mut bv) = (0usize, 0.0);
            for i in 0..=grid_points {
                let v = modulus(i as f64 * h);
                if v > bv {
                    bi = i;
                    bv = v;
                }
            }
            let lo = (bi as f64 - 1.0).max(0.0) * h;
            let hi = ((bi + 1) as f64 * h).min(a);
            let (x, v) = golden_max(modulus, lo, hi, 1e-12 * a);
            let (x, v) = if v >= bv { (x, v) } else { (bi as f64 * h, bv) };
            if v > best.value {
                best.value = v;
                best.argmax_x = x;
            }
        }
        Ok(best)
    }

    /// Evaluator for `Q`, `G⁺(·, m)` or `G⁻(·, m)` together with its mean.
    pub fn cumulative_profile(&self, kind: ProfileKind) -> Result<CumulativeProfile> {
        let (q, _) = self.normalize_mean();
        let j = kind.frequency();
        let a = q.period;
        let linear = q.fourier_coefficient(j)?;
        let mut profile = CumulativeProfile { kind, potential: q, index: j, linear, mean: cz(0.0, 0.0) };
        profile.mean = match &profile.potential.form {
            PotentialForm::TrigPolynomial(t) => t
                .iter()
                .filter(|e| e.0 != j)
                .map(|&(k, c)| -c / cz(0.0, 2.0 * PI * (k - j) as f64))
                .sum(),
            _ => {
                let nodes = profile.potential.nodes();
                let mut acc = cz(0.0, 0.0);
                for w in nodes.windows(2) {
                    acc += adaptive_simpson(|x| profile.eval(x), w[0], w[1], 1e-13 * a, DEFAULT_MAX_DEPTH)?.value;
                }
                acc / a
            }
        };
        Ok(profile)
    }
}

/// `(e^z − 1)`, written so the small-argument case keeps full precision.
trait ExpM1 {
    fn exp_m1_ish(self) -> Complex64;
}

impl ExpM1 for Complex64 {
    fn exp_m1_ish(self) -> Complex64 {
        self * phi1(self)
    }
}

/// `φ₁(z) = (e^z − 1)/z`.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = cz(1.0, 0.0);
        let mut sum = term;
        for k in 2..=20 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `φ₂(z) = (e^z − 1 − z)/z²`.
fn phi2(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = cz(0.5, 0.0);
        let mut sum = term;
        for k in 3..=22 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0 - z) / (z * z)
    }
}

/// Fourier coefficients `c_k`, `|k| <= half_width`, with `c₀ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTable {
    period: f64,
    half_width: usize,
    coeffs: Vec<Complex64>,
    sup_coeff: f64,
    /// coefficients beyond the half-width are known to vanish
    exact_beyond: bool,
}

impl FourierTable {
    /// Builds a table from `c_{−K} … c_K`; the centre entry is forced to zero.
    pub fn new(period: f64, half_width: usize, mut coeffs: Vec<Complex64>, exact_beyond: bool) -> Self {
        assert_eq!(coeffs.len(), 2 * half_width + 1, "coefficient count must be 2K+1");
        coeffs[half_width] = cz(0.0, 0.0);
        let sup_coeff = coeffs.iter().fold(0.0, |m: f64, c| m.max(c.norm()));
        Self { period, half_width, coeffs, sup_coeff, exact_beyond }
    }

    /// Finite table from `(k, c_k)` pairs; entries beyond are exactly zero.
    pub fn from_terms(period: f64, terms: &[(i64, Complex64)]) -> Self {
        let hw = terms.iter().map(|e| e.0.unsigned_abs() as usize).max().unwrap_or(1).max(1);
        let mut coeffs = vec![cz(0.0, 0.0); 2 * hw + 1];
        for &(k, c) in terms {
            coeffs[(k + hw as i64) as usize] += c;
        }
        Self::new(period, hw, coeffs, true)
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// `M = sup |c_k|` over the stored entries.
    pub fn sup_coeff(&self) -> f64 {
        self.sup_coeff
    }

    pub fn is_exact_beyond(&self) -> bool {
        self.exact_beyond
    }

    /// `c_k`; zero beyond the half-width for finite tables, an error otherwise.
    pub fn get(&self, k: i64) -> Result<Complex64> {
        if k.unsigned_abs() as usize <= self.half_width {
            Ok(self.coeffs[(k + self.half_width as i64) as usize])
        } else if self.exact_beyond {
            Ok(cz(0.0, 0.0))
        } else {
            Err(HillError::TableExtension { needed: k, half_width: self.half_width })
        }
    }

    /// `c_k`, treating anything beyond the stored range as zero.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.get(k).unwrap_or(cz(0.0, 0.0))
    }

    /// Indices with nonzero stored coefficients.
    pub fn support(&self) -> Vec<i64> {
        let hw = self.half_width as i64;
        (-hw..=hw).filter(|&k| self.coeffs[(k + hw) as usize] != cz(0.0, 0.0)).collect()
    }

    /// Largest defect `|c_{−k} − conj(c_k)|`.
    pub fn symmetry_defect(&self) -> f64 {
        let hw = self.half_width as i64;
        (1..=hw).map(|k| (self.coeff(-k) - self.coeff(k).conj()).norm()).fold(0.0, f64::max)
    }

    /// Multiplies every coefficient by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.period, self.half_width, self.coeffs.iter().map(|c| c * s).collect(), self.exact_beyond)
    }
}

/// `ρ(m)` with the location of the supremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoValue {
    pub m: usize,
    /// frequency index `N` used in the exponent
    pub n: i64,
    pub value: f64,
    pub argmax_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Q,
    GPlus { m: usize },
    GMinus { m: usize },
}

impl ProfileKind {
    fn frequency(self) -> i64 {
        match self {
            ProfileKind::Q => 0,
            ProfileKind::GPlus { m } => 2 * m as i64 + 2,
            ProfileKind::GMinus { m } => -(2 * m as i64 + 2),
        }
    }
}

/// `Q(x) = a⁻¹∫₀ˣ q`, or `G±(x, m) = a⁻¹∫₀ˣ q e^{∓i2Nπt/a} dt − a⁻¹ c_{±N} x`.
#[derive(Debug, Clone)]
pub struct CumulativeProfile {
    pub kind: ProfileKind,
    potential: Potential,
    index: i64,
    linear: Complex64,
    /// `Q₀` or `G±₀(m)`, the mean over one period
    pub mean: Complex64,
}

impl CumulativeProfile {
    pub fn eval(&self, x: f64) -> Complex64 {
        let a = self.potential.period;
        (self.potential.partial_integral(x, self.index) - self.linear * x) / a
    }

    /// Fourier coefficient of the profile at `j != 0`, from its series form:
    /// `c_{j+s}/(i2πj)` with `s` the profile's frequency shift.
    pub fn series_coefficient(&self, j: i64) -> Result<Complex64> {
        if j == 0 {
            return Ok(self.mean);
        }
        Ok(self.potential.fourier_coefficient(j + self.index)? / cz(0.0, 2.0 * PI * j as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_mean_constant_and_mean_free() {
        let (q, shift) = Potential::trig(1.0, &[(0, cz(5.0, 0.0))]).unwrap().normalize_mean();
        assert_eq!(shift, 5.0);
        assert_eq!(q.eval(0.3), 0.0);

        let (_, shift) = Potential::mathieu(1.0, 1.0).normalize_mean();
        assert_eq!(shift, 0.0);
        let (_, shift) = Potential::square(1.0, 2.0).normalize_mean();
        assert_eq!(shift, 0.0);

        let (q, shift) = Potential::piecewise(1.0, &[0.0, 0.25, 1.0], &[4.0, 0.0]).unwrap().normalize_mean();
        assert!((shift - 1.0).abs() < 1e-15);
        assert!(q.fourier_coefficient(0).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn coefficients_of_simple_forms() {
        assert_eq!(Potential::zero(1.0).fourier_coefficient(5).unwrap(), cz(0.0, 0.0));
        let q = Potential::single_harmonic(2, 0.3, 1.0);
        assert_eq!(q.fourier_coefficient(2).unwrap(), cz(0.3, 0.0));
        assert_eq!(q.fourier_coefficient(-2).unwrap(), cz(0.3, 0.0));
        assert_eq!(q.fourier_coefficient(1).unwrap(), cz(0.0, 0.0));
        // 2γcos(4πx/a) evaluates as expected
        assert!((q.eval(0.1) - 0.6 * (0.4 * PI).cos()).abs() < 1e-15);
    }

    #[test]
    fn square_wave_first_coefficient() {
        let q = Potential::square(1.0, 1.0);
        let c1 = q.fourier_coefficient(1).unwrap();
        assert!((c1 - cz(0.0, -2.0 / PI)).norm() < 1e-15);
        assert!(q.fourier_coefficient(2).unwrap().norm() < 1e-15);
    }

    #[test]
    fn invalid_potentials() {
        assert!(Potential::trig(0.0, &[]).is_err());
        assert!(Potential::trig(1.0, &[(1, cz(1.0, 0.0))]).is_err());
        assert!(Potential::piecewise(1.0, &[0.0, 0.6, 0.5, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(Potential::piecewise(1.0, &[0.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(Potential::sampled(1.0, &[1.0]).is_err());
    }

    #[test]
    fn table_extension_error_for_infinite_series() {
        let t = Potential::square(1.0, 1.0).fourier_table(4).unwrap();
        assert!(!t.is_exact_beyond());
        assert!(matches!(t.get(9), Err(HillError::TableExtension { .. })));
        let t = Potential::mathieu(1.0, PI).fourier_table(4).unwrap();
        assert_eq!(t.get(9).unwrap(), cz(0.0, 0.0));
        assert_eq!(t.sup_coeff(), 1.0);
    }

    #[test]
    fn rho_of_zero_and_resonant_term() {
        assert_eq!(Potential::zero(1.0).rho(3, 1024).unwrap().value, 0.0);
        // θ_N + θ_{−N}: resonant term contributes x, oscillating remainder small
        let m = 3;
        let q = Potential::single_harmonic(2 * m as i64 + 2, 1.0, 1.0);
        let r = q.rho(m, 1024).unwrap();
        assert!((r.value - 1.0).abs() < 1e-3, "{r:?}");
        assert!(q.rho(m, 16).is_err());
    }

    #[test]
    fn q_profile_of_cosine() {
        let q = Potential::mathieu(1.0, 1.0); // 2cos(2πx)
        let p = q.cumulative_profile(ProfileKind::Q).unwrap();
        for &x in &[0.0, 0.1, 0.37, 0.8, 1.0] {
            let expect = (2.0 * PI * x).sin() / PI;
            assert!((p.eval(x) - cz(expect, 0.0)).norm() < 1e-14);
        }
        assert!(p.mean.norm() < 1e-15);
    }

    #[test]
    fn phi_functions_match_direct_formula() {
        for &z in &[cz(0.3, -0.2), cz(0.0, 0.49), cz(0.0, 0.51), cz(0.0, -3.0)] {
            let d1 = (z.exp() - 1.0) / z;
            let d2 = (z.exp() - 1.0 - z) / (z * z);
            assert!((phi1(z) - d1).norm() < 1e-13);
            assert!((phi2(z) - d2).norm() < 1e-12);
        }
    }
}
