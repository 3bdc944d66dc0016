//! Perturbation series for one band pair, leading-order edge predictions,
//! hypothesis diagnostics and instability-interval widths.
//!
//! For a band with frequency `N` and `Λ(λ, n) = λ − n²π²/a²`:
//!
//! ```text
//! a(λ)  = Σ_{m₁ ∉ {0, N}}  c_{m₁} c_{−m₁}   / Λ(λ, N − 2m₁)
//! b(λ)  = Σ_{m₁ ∉ {0, N}}  c_{m₁} c_{N−m₁}  / Λ(λ, N − 2m₁)
//! a′(λ) = Σ_{m₁ ∉ {0, −N}} c_{m₁} c_{−m₁}   / Λ(λ, N + 2m₁)
//! b′(λ) = Σ_{m₁ ∉ {0, −N}} c_{m₁} c_{−N−m₁} / Λ(λ, N + 2m₁)
//! ```
//!
//! The band edges then satisfy `λ − N²π²/a² ≈ a ± |c_N + b|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HillError, Result};
use crate::kernels::fit::{fit_log_slope, max_min_ratio, LogFit};
use crate::potential::{FourierTable, Potential, DEFAULT_RHO_GRID};
use crate::spectrum::{default_truncation, BandIndex, BoundaryCondition, EigenPair};

/// Relative size below which a series denominator counts as resonant.
pub const RESONANCE_TOL: f64 = 1e-8;
pub const DEFAULT_EPSILON: f64 = 0.25;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Series values for one band at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTerms {
    pub m: usize,
    pub n: usize,
    pub a_val: Complex64,
    pub b_val: Complex64,
    pub a_prime: Complex64,
    pub b_prime: Complex64,
    /// bound on the second-order remainder `|R(m)|`
    pub r_bound: f64,
    pub r_prime_bound: f64,
    /// bound on what the truncation `|m₁| <= M₁` leaves out of `a` and `b`
    pub tail_bound: f64,
    pub truncation: usize,
    pub lambda_used: f64,
}

/// `Λ(λ, n) = λ − n²π²/a²`.
fn big_lambda(lambda: f64, n: i64, period: f64) -> f64 {
    lambda - (n as f64 * PI / period).powi(2)
}

fn checked_denominator(band: &BandIndex, lambda: f64, n: i64, m1: i64, period: f64) -> Result<f64> {
    let d = big_lambda(lambda, n, period);
    if d.abs() < RESONANCE_TOL * band.center {
        return Err(HillError::NearResonance { n: band.n, m1, denominator: d });
    }
    Ok(d)
}

/// Partial sums of `a, b, a′, b′` over `|m₁| <= M₁` (default: the table's
/// half-width) together with remainder and tail bounds.
pub fn series_terms(coeffs: &FourierTable, band: &BandIndex, lambda: f64, m1_max: Option<usize>) -> Result<SeriesTerms> {
    let hw = coeffs.half_width();
    let trunc = m1_max.unwrap_or(hw);
    if trunc > hw && !coeffs.is_exact_beyond() {
        return Err(HillError::TableExtension { needed: trunc as i64, half_width: hw });
    }
    let period = coeffs.period();
    let n = band.n as i64;
    let t = trunc as i64;
    let (mut a_val, mut b_val, mut a_prime, mut b_prime) = (zero(), zero(), zero(), zero());
    for m1 in -t..=t {
        let c1 = coeffs.coeff(m1);
        if m1 == 0 || c1 == zero() {
            continue;
        }
        if m1 != n {
            let d = checked_denominator(band, lambda, n - 2 * m1, m1, period)?;
            a_val += c1 * coeffs.coeff(-m1) / d;
            b_val += c1 * coeffs.coeff(n - m1) / d;
        }
        if m1 != -n {
            let d = checked_denominator(band, lambda, n + 2 * m1, m1, period)?;
            a_prime += c1 * coeffs.coeff(-m1) / d;
            b_prime += c1 * coeffs.coeff(-n - m1) / d;
        }
    }
    let tail_bound = if coeffs.is_exact_beyond() && trunc >= hw {
        0.0
    } else {
        let mm = coeffs.sup_coeff();
        let tf = trunc as f64;
        let nf = band.n as f64;
        let harmonic = if tf > nf { 1.0 / (tf - nf) + 1.0 / tf } else { f64::INFINITY };
        mm * mm * (period / (2.0 * PI)).powi(2) * harmonic
    };
    Ok(SeriesTerms {
        m: band.m,
        n: band.n,
        a_val,
        b_val,
        a_prime,
        b_prime,
        r_bound: r_bound(coeffs, band, Some(trunc), false),
        r_prime_bound: r_bound(coeffs, band, Some(trunc), true),
        tail_bound,
        truncation: trunc,
        lambda_used: lambda,
    })
}

/// `3M Σ |c_{m₁} c_{m₂}| / (|Λ⁰(m₁)| |Λ⁰(m₁+m₂)|)` with
/// `Λ⁰(s) = 4s(N−s)π²/a²`, over `m₁, m₂, m₁+m₂ ≠ 0` and `m₁, m₁+m₂ ≠ N`.
/// The primed variant uses `N → −N`.
pub fn r_bound(coeffs: &FourierTable, band: &BandIndex, m1_max: Option<usize>, primed: bool) -> f64 {
    let period = coeffs.period();
    let n = if primed { -(band.n as i64) } else { band.n as i64 };
    let t = m1_max.unwrap_or(coeffs.half_width()) as i64;
    let lam0 = |s: i64| 4.0 * (s as f64) * ((n - s) as f64) * (PI / period).powi(2);
    let support: Vec<(i64, f64)> = coeffs
        .support()
        .into_iter()
        .filter(|k| k.abs() <= t)
        .map(|k| (k, coeffs.coeff(k).norm()))
        .collect();
    let mut sum = 0.0;
    for &(m1, c1) in &support {
        if m1 == n {
            continue;
        }
        let d1 = lam0(m1).abs();
        for &(m2, c2) in &support {
            let s = m1 + m2;
            if s == 0 || s == n {
                continue;
            }
            sum += c1 * c2 / (d1 * lam0(s).abs());
        }
    }
    3.0 * coeffs.sup_coeff() * sum
}

/// Leading- and second-order band-edge predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TitchmarshPrediction {
    pub band: BandIndex,
    pub c_abs: f64,
    /// `center ∓ |c_N|`
    pub leading_lower: f64,
    pub leading_upper: f64,
    /// `center + Re a ∓ |c_N + b|`
    pub second_lower: f64,
    pub second_upper: f64,
    /// `ρ(m)/m`, the scale of the claimed error
    pub order_term: f64,
    pub refined: bool,
    /// refinement diverged or hit a resonance; second-order values are unrefined
    pub fallback: bool,
}

/// Coefficient table wide enough for the series of bands up to `n_max`.
pub fn series_table(q: &Potential, n_max: usize) -> Result<FourierTable> {
    let (qn, _) = q.normalize_mean();
    let hw = match qn.degree() {
        Some(d) => d.max(1),
        None => 2 * default_truncation(n_max),
    };
    qn.fourier_table(hw)
}

/// Predictions for one band of `q`.
pub fn titchmarsh_predict(q: &Potential, band: &BandIndex, refine: bool) -> Result<TitchmarshPrediction> {
    let table = series_table(q, band.n)?;
    let rho = q.normalize_mean().0.rho_at(band.m, band.n as i64, DEFAULT_RHO_GRID)?.value;
    predict_from_table(&table, band, refine, rho)
}

/// As [`titchmarsh_predict`] for a prepared table and `ρ(m)`.
pub fn predict_from_table(coeffs: &FourierTable, band: &BandIndex, refine: bool, rho: f64) -> Result<TitchmarshPrediction> {
    let c = coeffs.get(band.n as i64)?;
    let c_abs = c.norm();
    let center = band.center;
    let second = |lambda: f64, sign: f64| -> Result<f64> {
        let s = series_terms(coeffs, band, lambda, None)?;
        Ok(center + s.a_val.re + sign * (c + s.b_val).norm())
    };
    let first_lower = second(center, -1.0)?;
    let first_upper = second(center, 1.0)?;
    let (mut lower, mut upper, mut fallback) = (first_lower, first_upper, false);
    if refine {
        let run = |start: f64, sign: f64| -> Option<f64> {
            let mut lam = start;
            let mut last_step = (start - center).abs();
            for _ in 0..3 {
                let next = second(lam, sign).ok()?;
                let step = (next - lam).abs();
                if step > last_step && step > 1e-14 * center {
                    return None;
                }
                last_step = step;
                lam = next;
            }
            Some(lam)
        };
        match (run(first_lower, -1.0), run(first_upper, 1.0)) {
            (Some(l), Some(u)) => {
                lower = l;
                upper = u;
            }
            _ => fallback = true,
        }
    }
    let m = band.m.max(1) as f64;
    Ok(TitchmarshPrediction {
        band: *band,
        c_abs,
        leading_lower: center - c_abs,
        leading_upper: center + c_abs,
        second_lower: lower.min(upper),
        second_upper: lower.max(upper),
        order_term: rho / m,
        refined: refine && !fallback,
        fallback,
    })
}

/// A diagnostic verdict; `holds` is `None` when the condition cannot be
/// evaluated (e.g. `c_N = 0` throughout).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: Option<bool>,
    /// fitted log-slope, or the extreme value the verdict was based on
    pub statistic: Option<f64>,
}

impl Verdict {
    fn inapplicable() -> Self {
        Self { holds: None, statistic: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub m: usize,
    pub n: usize,
    pub rho: f64,
    pub c_abs: f64,
    /// `ρ(m)/(m|c_N|)`
    pub ratio_main: Option<f64>,
    /// `|c_N|/ρ(m)`
    pub ratio_sim: Option<f64>,
    /// `m|c_N|`
    pub eps_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub bc: BoundaryCondition,
    pub entries: Vec<ConditionEntry>,
    pub epsilon: f64,
    /// `ρ(m)/(m|c_N|) → 0`: fitted log-slope below −0.1
    pub rho_decay: Verdict,
    /// `|c_N|/ρ(m)` stays within `[0.1, 10]`
    pub rho_comparable: Verdict,
    /// `min m|c_N| > ε`
    pub coefficient_floor: Verdict,
}

/// `ρ` for each band of the range, on the mean-free potential.
pub fn rho_sequence(q: &Potential, bc: BoundaryCondition, ms: &[usize], grid: usize) -> Result<Vec<f64>> {
    let (qn, _) = q.normalize_mean();
    ms.iter()
        .map(|&m| qn.rho_at(m, BandIndex::new(bc, m, q.period()).n as i64, grid).map(|r| r.value))
        .collect()
}

pub fn condition_report(
    q: &Potential,
    bc: BoundaryCondition,
    ms: &[usize],
    epsilon: f64,
    grid: usize,
) -> Result<ConditionReport> {
    if ms.is_empty() {
        return Err(HillError::InvalidArgument("condition report needs a nonempty band range".into()));
    }
    let n_max = ms.iter().map(|&m| BandIndex::new(bc, m, q.period()).n).max().unwrap_or(1);
    let table = series_table(q, n_max)?;
    let rhos = rho_sequence(q, bc, ms, grid)?;
    condition_report_from(&table, bc, ms, &rhos, epsilon)
}

/// [`condition_report`] with the coefficient table and `ρ(m)` supplied.
pub fn condition_report_from(
    coeffs: &FourierTable,
    bc: BoundaryCondition,
    ms: &[usize],
    rhos: &[f64],
    epsilon: f64,
) -> Result<ConditionReport> {
    if ms.is_empty() || rhos.len() != ms.len() {
        return Err(HillError::InvalidArgument(format!("{} ρ values for {} bands", rhos.len(), ms.len())));
    }
    let table = coeffs;
    let entries: Vec<ConditionEntry> = ms
        .iter()
        .zip(rhos)
        .map(|(&m, &rho)| {
            let band = BandIndex::new(bc, m, table.period());
            let c_abs = table.coeff(band.n as i64).norm();
            let mf = m.max(1) as f64;
            ConditionEntry {
                m,
                n: band.n,
                rho,
                c_abs,
                ratio_main: (c_abs > 0.0).then(|| rho / (mf * c_abs)),
                ratio_sim: (rho > 0.0).then(|| c_abs / rho),
                eps_margin: mf * c_abs,
            }
        })
        .collect();

    let main_pts: Vec<(f64, f64)> = entries
        .iter()
        .filter_map(|e| e.ratio_main.filter(|r| *r > 0.0).map(|r| (e.m.max(1) as f64, r)))
        .collect();
    let rho_decay = if main_pts.len() == entries.len() {
        match fit_log_slope(&main_pts) {
            Ok(fit) => Verdict { holds: Some(fit.slope < -0.1), statistic: Some(fit.slope) },
            Err(_) => Verdict::inapplicable(),
        }
    } else {
        Verdict::inapplicable()
    };
    let sims: Vec<f64> = entries.iter().filter_map(|e| e.ratio_sim).collect();
    let any_c = entries.iter().any(|e| e.c_abs > 0.0);
    let rho_comparable = if sims.is_empty() || !any_c {
        Verdict::inapplicable()
    } else {
        let ok = sims.len() == entries.len() && sims.iter().all(|r| (0.1..=10.0).contains(r));
        let worst = sims.iter().map(|r| r.ln().abs()).fold(0.0, f64::max).exp();
        Verdict { holds: Some(ok), statistic: Some(worst) }
    };
    let coefficient_floor = if !any_c {
        Verdict::inapplicable()
    } else {
        let min = entries.iter().map(|e| e.eps_margin).fold(f64::INFINITY, f64::min);
        Verdict { holds: Some(min > epsilon), statistic: Some(min) }
    };
    Ok(ConditionReport { bc, entries, epsilon, rho_decay, rho_comparable, coefficient_floor })
}

/// Measured width of one instability interval against `|c_N|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapEntry {
    pub bc: BoundaryCondition,
    pub m: usize,
    pub n: usize,
    pub gap: f64,
    pub c_abs: f64,
    /// `ℓ/(2|c_N|)`, absent when `c_N = 0`
    pub normalized_half: Option<f64>,
    /// `ℓ/|c_N|`, absent when `c_N = 0`
    pub normalized_full: Option<f64>,
    /// `|ℓ − 2|c_N||`
    pub residual: f64,
    pub rho: Option<f64>,
    /// `residual·m/ρ(m)`
    pub scaled_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub entries: Vec<GapEntry>,
    /// log-slope of `residual·m/ρ(m)` against `m`
    pub scaled_residual_fit: Option<LogFit>,
}

impl GapReport {
    pub fn max_half_deviation(&self) -> Option<f64> {
        self.entries.iter().filter_map(|e| e.normalized_half.map(|r| (r - 1.0).abs())).reduce(f64::max)
    }

    /// Attaches `ρ(m)` (same order as the entries) and fits the scaled residuals.
    pub fn with_rho(mut self, rho: &[f64]) -> Self {
        for (e, &r) in self.entries.iter_mut().zip(rho) {
            e.rho = Some(r);
            e.scaled_residual = (r > 0.0).then(|| e.residual * e.m.max(1) as f64 / r);
        }
        let pts: Vec<(f64, f64)> = self
            .entries
            .iter()
            .filter_map(|e| e.scaled_residual.filter(|s| *s > 0.0).map(|s| (e.m.max(1) as f64, s)))
            .collect();
        self.scaled_residual_fit = fit_log_slope(&pts).ok();
        self
    }
}

pub fn gap_report(pairs: &[EigenPair], coeffs: &FourierTable) -> Result<GapReport> {
    let entries = pairs
        .iter()
        .map(|p| {
            let c_abs = coeffs.get(p.band.n as i64)?.norm();
            let nonzero = c_abs > 0.0;
            Ok(GapEntry {
                bc: p.band.bc,
                m: p.band.m,
                n: p.band.n,
                gap: p.gap,
                c_abs,
                normalized_half: nonzero.then(|| p.gap / (2.0 * c_abs)),
                normalized_full: nonzero.then(|| p.gap / c_abs),
                residual: (p.gap - 2.0 * c_abs).abs(),
                rho: None,
                scaled_residual: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapReport { entries, scaled_residual_fit: None })
}

/// Per-band outcome of the simplicity criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplicityEntry {
    pub m: usize,
    pub gap: f64,
    pub threshold: f64,
    /// `gap − threshold`
    pub margin: f64,
    pub simple: bool,
    /// `c_N ≠ 0`, the hypothesis under which simplicity is asserted
    pub hypothesis: bool,
}

/// Band `m` is simple when `gap > max(2·eig_tol, |c_N|/2 − C·ρ(m)/m)`.
pub fn simplicity_check(
    pairs: &[EigenPair],
    coeffs: &FourierTable,
    rho: &[f64],
    c_fit: f64,
    eig_tol: f64,
) -> Result<Vec<SimplicityEntry>> {
    if rho.len() != pairs.len() {
        return Err(HillError::InvalidArgument(format!(
            "{} ρ values for {} pairs",
            rho.len(),
            pairs.len()
        )));
    }
    pairs
        .iter()
        .zip(rho)
        .map(|(p, &r)| {
            let c_abs = coeffs.get(p.band.n as i64)?.norm();
            let threshold = (2.0 * eig_tol).max(0.5 * c_abs - c_fit * r / p.band.m.max(1) as f64);
            Ok(SimplicityEntry {
                m: p.band.m,
                gap: p.gap,
                threshold,
                margin: p.gap - threshold,
                simple: p.gap > threshold,
                hypothesis: c_abs > 0.0,
            })
        })
        .collect()
}

/// One band of the asymptotic comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymEntry {
    pub bc: BoundaryCondition,
    pub m: usize,
    pub n: usize,
    pub center: f64,
    pub lower: f64,
    pub upper: f64,
    pub c_abs: f64,
    pub rho: f64,
    /// `|λ₁ − center + |c_N||`
    pub residual_lower: f64,
    /// `|λ₂ − center − |c_N||`
    pub residual_upper: f64,
    pub scaled_lower: Option<f64>,
    pub scaled_upper: Option<f64>,
    /// `max |λ_j − second-order prediction|`
    pub second_order_error: f64,
    pub r_bound: f64,
}

/// Residual rates and boundedness over a band range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymReport {
    pub entries: Vec<AsymEntry>,
    pub slope_lower: Option<f64>,
    pub slope_upper: Option<f64>,
    /// max/min of `residual·m/ρ(m)`
    pub spread_lower: Option<f64>,
    pub spread_upper: Option<f64>,
    /// largest `residual·m/ρ(m)`, used as the fitted constant `C`
    pub fitted_constant: Option<f64>,
    /// fraction of bands where the second-order prediction is at least as good
    pub second_order_wins: f64,
}

/// Compares computed pairs with the leading and second-order predictions.
pub fn asym_report(pairs: &[EigenPair], coeffs: &FourierTable, rho: &[f64], refine: bool) -> Result<AsymReport> {
    if rho.len() != pairs.len() {
        return Err(HillError::InvalidArgument(format!(
            "{} ρ values for {} pairs",
            rho.len(),
            pairs.len()
        )));
    }
    let mut entries = Vec::with_capacity(pairs.len());
    let mut wins = 0usize;
    for (p, &r) in pairs.iter().zip(rho) {
        let band = p.band;
        let pred = predict_from_table(coeffs, &band, refine, r)?;
        let c_abs = pred.c_abs;
        let residual_lower = (p.lower - (band.center - c_abs)).abs();
        let residual_upper = (p.upper - (band.center + c_abs)).abs();
        let second = (p.lower - pred.second_lower).abs().max((p.upper - pred.second_upper).abs());
        if second <= residual_lower.max(residual_upper) {
            wins += 1;
        }
        let mf = band.m.max(1) as f64;
        entries.push(AsymEntry {
            bc: band.bc,
            m: band.m,
            n: band.n,
            center: band.center,
            lower: p.lower,
            upper: p.upper,
            c_abs,
            rho: r,
            residual_lower,
            residual_upper,
            scaled_lower: (r > 0.0).then(|| residual_lower * mf / r),
            scaled_upper: (r > 0.0).then(|| residual_upper * mf / r),
            second_order_error: second,
            r_bound: r_bound(coeffs, &band, None, false),
        });
    }
    let slope = |f: &dyn Fn(&AsymEntry) -> f64| -> Option<f64> {
        let pts: Vec<(f64, f64)> = entries.iter().map(|e| (e.m.max(1) as f64, f(e))).collect();
        fit_log_slope(&pts).ok().map(|fit| fit.slope)
    };
    let spread = |f: &dyn Fn(&AsymEntry) -> Option<f64>| -> Option<f64> {
        let v: Option<Vec<f64>> = entries.iter().map(f).collect();
        v.and_then(|v| max_min_ratio(&v))
    };
    let fitted_constant = entries
        .iter()
        .flat_map(|e| [e.scaled_lower, e.scaled_upper])
        .collect::<Option<Vec<f64>>>()
        .and_then(|v| v.into_iter().reduce(f64::max));
    Ok(AsymReport {
        slope_lower: slope(&|e| e.residual_lower),
        slope_upper: slope(&|e| e.residual_upper),
        spread_lower: spread(&|e| e.scaled_lower),
        spread_upper: spread(&|e| e.scaled_upper),
        fitted_constant,
        second_order_wins: if entries.is_empty() { 0.0 } else { wins as f64 / entries.len() as f64 },
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::Method;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn band(m: usize, a: f64) -> BandIndex {
        BandIndex::new(BoundaryCondition::Periodic, m, a)
    }

    #[test]
    fn free_potential_has_empty_series() {
        let t = Potential::zero(1.0).fourier_table(8).unwrap();
        let b = band(3, 1.0);
        let s = series_terms(&t, &b, b.center, None).unwrap();
        assert_eq!((s.a_val, s.b_val, s.r_bound, s.tail_bound), (zero(), zero(), 0.0, 0.0));
        let p = predict_from_table(&t, &b, true, 0.0).unwrap();
        assert_eq!((p.leading_lower, p.second_upper), (b.center, b.center));
    }

    #[test]
    fn single_harmonic_two_term_closed_form() {
        // γθ_K + γθ_{−K}: a = γ²(1/Λ⁰(K) + 1/Λ⁰(−K)), b = 0 off resonance
        let (g, k, a) = (0.3, 3i64, 1.0);
        let t = Potential::single_harmonic(k, g, a).fourier_table(3).unwrap();
        let b = band(4, a); // N = 10
        let s = series_terms(&t, &b, b.center, None).unwrap();
        let lam0 = |s: i64| 4.0 * s as f64 * (10 - s) as f64 * PI * PI;
        let expect = g * g * (1.0 / lam0(k) + 1.0 / lam0(-k));
        assert!((s.a_val - c(expect)).norm() < 1e-16);
        assert_eq!(s.b_val, zero());
        assert!((s.a_val - s.a_prime).norm() < 1e-16);
    }

    #[test]
    fn b_collects_pairs_summing_to_n() {
        // c₁ = 0.5, c₃ = 0.2 (and conjugates): N = 4 pairs (1,3), (3,1), (−1,5)…
        let t = FourierTable::from_terms(1.0, &[(1, c(0.5)), (-1, c(0.5)), (3, c(0.2)), (-3, c(0.2))]);
        let b = band(1, 1.0);
        let s = series_terms(&t, &b, b.center, None).unwrap();
        let mut expect = zero();
        for m1 in -3i64..=3 {
            if m1 == 0 || m1 == 4 {
                continue;
            }
            let d = b.center - ((4 - 2 * m1) as f64 * PI).powi(2);
            expect += t.coeff(m1) * t.coeff(4 - m1) / d;
        }
        assert!((s.b_val - expect).norm() < 1e-16);
        assert!(s.b_val.norm() > 0.0);
        assert!((s.b_prime.conj() - s.b_val).norm() < 1e-15);
    }

    #[test]
    fn r_bound_four_term_enumeration() {
        let g = 0.7;
        let t = Potential::mathieu(g, 1.0).fourier_table(1).unwrap();
        let b = band(4, 1.0); // N = 10
        let lam0 = |s: i64| (4.0 * s as f64 * (10 - s) as f64 * PI * PI).abs();
        // admissible (m₁, m₂) ∈ {±1}² with m₁+m₂ ≠ 0: (1,1) and (−1,−1)
        let expect = 3.0 * g * (g * g / (lam0(1) * lam0(2)) + g * g / (lam0(-1) * lam0(-2)));
        assert!((r_bound(&t, &b, None, false) - expect).abs() < 1e-18);
    }

    #[test]
    fn resonance_is_reported() {
        let t = Potential::mathieu(1.0, 1.0).fourier_table(1).unwrap();
        let b = band(1, 1.0); // N = 4; Λ(λ, 4 − 2) vanishes at λ = 4π²
        let err = series_terms(&t, &b, 4.0 * PI * PI, None).unwrap_err();
        assert!(matches!(err, HillError::NearResonance { n: 4, .. }));
    }

    #[test]
    fn leading_prediction_at_resonant_harmonic() {
        let q = Potential::single_harmonic(6, 0.05, 1.0);
        let b = band(2, 1.0);
        let p = titchmarsh_predict(&q, &b, true).unwrap();
        assert!((p.leading_upper - p.leading_lower - 0.1).abs() < 1e-12);
        assert!(p.refined && !p.fallback);
    }

    #[test]
    fn conditions_for_free_and_mathieu() {
        let ms: Vec<usize> = (1..=6).collect();
        let r = condition_report(&Potential::zero(1.0), BoundaryCondition::Periodic, &ms, 0.25, 256).unwrap();
        assert_eq!((r.rho_decay.holds, r.rho_comparable.holds, r.coefficient_floor.holds), (None, None, None));
        let r = condition_report(&Potential::mathieu(1.0, PI), BoundaryCondition::Periodic, &ms, 0.25, 256).unwrap();
        assert_eq!(r.rho_decay.holds, None);
        assert!(r.entries.iter().all(|e| e.ratio_main.is_none()));
    }

    #[test]
    fn gap_report_flags_zero_coefficients() {
        let b = band(2, 1.0);
        let pair = EigenPair::new(b, 10.0, 10.0, Method::Galerkin, 1e-10, true);
        let t = Potential::zero(1.0).fourier_table(8).unwrap();
        let g = gap_report(&[pair], &t).unwrap();
        assert_eq!(g.entries[0].normalized_half, None);
        assert_eq!(g.entries[0].gap, 0.0);
        let s = simplicity_check(&[pair], &t, &[0.0], 1.0, 1e-10).unwrap();
        assert!(!s[0].simple && !s[0].hypothesis);
    }
}
