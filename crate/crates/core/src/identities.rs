//! Sum-versus-integral identities for trigonometric-polynomial potentials.
//!
//! Every identity equates a finite double (or single) sum over Fourier
//! coefficients with the mean of a product of the mean-free profiles
//! `Q̃ = Q − Q₀`, `G̃± = G± − G±₀`, `q` and exponentials. For finite tables
//! both sides are finite exponential sums, so the integral side is formed by
//! exact convolution rather than quadrature. Integrals are normalized,
//! `⟨f⟩ = a⁻¹∫₀ᵃ f`.
//!
//! With `P = 4π²` and `N = 2m+2`:
//!
//! ```text
//! b_profile: (a²/4π²) Σ c_{m₁}c_{N−m₁} / (m₁(N−m₁))            = −a² ⟨Q̃² θ_{−N}⟩
//! a_profile: (a²/2π²) Σ_{m₁>0} c_{m₁}c_{−m₁} / ((N+m₁)(N−m₁))  = −a² ⟨(G̃⁺)² θ_{2N}⟩
//! S₁ = −P⟨Q̃² q⟩          S₂ = −P⟨Q̃ G̃⁺ q θ_N⟩     S₃ = −P⟨Q̃ G̃⁻ q θ_{−N}⟩
//! S₄ = +P⟨G̃⁺ G̃⁻ q⟩       I₁ = −P⟨Q̃² q θ_{−N}⟩     I₂ = +P⟨Q̃ G̃⁺ q⟩
//! I₃ = −P⟨(G̃⁺)² q θ_N⟩
//! ```
//!
//! Each `S_j`, `I_j` sum runs over the indices where its own denominator is
//! nonzero. The assembled `S(m)` and `I(m)` use the set `m₁, m₂ ∉ {0, N}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HillError, Result};
use crate::potential::FourierTable;

pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IdentityName {
    #[serde(rename = "a_profile")]
    AProfile,
    #[serde(rename = "b_profile")]
    BProfile,
    S1,
    S2,
    S3,
    S4,
    I1,
    I2,
    I3,
    /// `S(m) = N⁻² Σ S_j` on the restricted index set
    #[serde(rename = "S_assembly")]
    SAssembly,
    /// `I(m) = N⁻² (I₁ + 2I₂ + I₃)` on the restricted index set
    #[serde(rename = "I_assembly")]
    IAssembly,
}

impl IdentityName {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityName::AProfile => "a_profile",
            IdentityName::BProfile => "b_profile",
            IdentityName::S1 => "S1",
            IdentityName::S2 => "S2",
            IdentityName::S3 => "S3",
            IdentityName::S4 => "S4",
            IdentityName::I1 => "I1",
            IdentityName::I2 => "I2",
            IdentityName::I3 => "I3",
            IdentityName::SAssembly => "S_assembly",
            IdentityName::IAssembly => "I_assembly",
        }
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub name: IdentityName,
    pub m: usize,
    pub sum_value: Complex64,
    pub integral_value: Complex64,
    pub abs_diff: f64,
}

impl IdentityResult {
    fn new(name: IdentityName, m: usize, sum_value: Complex64, integral_value: Complex64) -> Self {
        Self { name, m, sum_value, integral_value, abs_diff: (sum_value - integral_value).norm() }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.abs_diff <= tol
    }
}

/// Finite exponential sum `Σ s_k θ_k`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpSeries(BTreeMap<i64, Complex64>);

impl ExpSeries {
    pub fn monomial(k: i64) -> Self {
        Self(BTreeMap::from([(k, Complex64::new(1.0, 0.0))]))
    }

    pub fn from_fn(range: impl IntoIterator<Item = i64>, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let mut map = BTreeMap::new();
        for k in range {
            let v = f(k);
            if v != Complex64::new(0.0, 0.0) {
                map.insert(k, v);
            }
        }
        Self(map)
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        self.0.get(&k).copied().unwrap_or_default()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (&i, &a) in &self.0 {
            for (&j, &b) in &other.0 {
                *out.entry(i + j).or_insert(Complex64::new(0.0, 0.0)) += a * b;
            }
        }
        Self(out)
    }

    /// `⟨Π factors⟩`, the zeroth coefficient of the product.
    pub fn mean_of_product(factors: &[&Self]) -> Complex64 {
        match factors.split_last() {
            None => Complex64::new(1.0, 0.0),
            Some((last, rest)) => {
                let prod = rest.iter().fold(Self::monomial(0), |acc, f| acc.mul(f));
                // only the index-0 coefficient of the final product is needed
                prod.0.iter().map(|(&k, &v)| v * last.coeff(-k)).sum()
            }
        }
    }

    pub fn eval(&self, x: f64, period: f64) -> Complex64 {
        self.0.iter().map(|(&k, &v)| v * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * x / period)).sum()
    }
}

/// Mean-free profiles of a finite table for band `N`.
#[derive(Debug, Clone)]
pub struct Profiles {
    pub n: i64,
    pub q: ExpSeries,
    /// `Q − Q₀`, coefficients `c_j/(i2πj)`
    pub q_tilde: ExpSeries,
    /// `G⁺ − G⁺₀`, coefficients `c_{j+N}/(i2πj)`
    pub g_plus: ExpSeries,
    /// `G⁻ − G⁻₀`, coefficients `c_{j−N}/(i2πj)`
    pub g_minus: ExpSeries,
}

impl Profiles {
    pub fn new(coeffs: &FourierTable, n: i64) -> Self {
        let support = coeffs.support();
        let i2pi = |j: i64| Complex64::new(0.0, 2.0 * PI * j as f64);
        let q = ExpSeries::from_fn(support.iter().copied(), |k| coeffs.coeff(k));
        let q_tilde = ExpSeries::from_fn(support.iter().copied().filter(|&j| j != 0), |j| coeffs.coeff(j) / i2pi(j));
        let g_plus =
            ExpSeries::from_fn(support.iter().map(|k| k - n).filter(|&j| j != 0), |j| coeffs.coeff(j + n) / i2pi(j));
        let g_minus =
            ExpSeries::from_fn(support.iter().map(|k| k + n).filter(|&j| j != 0), |j| coeffs.coeff(j - n) / i2pi(j));
        Self { n, q, q_tilde, g_plus, g_minus }
    }
}

fn require_finite(coeffs: &FourierTable) -> Result<()> {
    if !coeffs.is_exact_beyond() {
        return Err(HillError::UnsupportedForm(
            "identities need a finite coefficient table (trigonometric polynomial)".into(),
        ));
    }
    if coeffs.support().iter().any(|&k| !(coeffs.coeff(k).re.is_finite() && coeffs.coeff(k).im.is_finite())) {
        return Err(HillError::UnsupportedForm("non-finite coefficient in table".into()));
    }
    Ok(())
}

fn band_n(m: usize) -> i64 {
    2 * m as i64 + 2
}

fn theta(k: i64) -> ExpSeries {
    ExpSeries::monomial(k)
}

pub fn check_b_identity(coeffs: &FourierTable, m: usize) -> Result<IdentityResult> {
    require_finite(coeffs)?;
    let n = band_n(m);
    let a = coeffs.period();
    let mut sum = Complex64::new(0.0, 0.0);
    for m1 in coeffs.support() {
        if m1 == 0 || m1 == n {
            continue;
        }
        sum += coeffs.coeff(m1) * coeffs.coeff(n - m1) / (m1 * (n - m1)) as f64;
    }
    sum *= a * a / (4.0 * PI * PI);
    let p = Profiles::new(coeffs, n);
    let integral = -a * a * ExpSeries::mean_of_product(&[&p.q_tilde, &p.q_tilde, &theta(-n)]);
    Ok(IdentityResult::new(IdentityName::BProfile, m, sum, integral))
}

pub fn check_a_identity(coeffs: &FourierTable, m: usize) -> Result<IdentityResult> {
    require_finite(coeffs)?;
    let n = band_n(m);
    let a = coeffs.period();
    let mut sum = Complex64::new(0.0, 0.0);
    for m1 in coeffs.support() {
        if m1 <= 0 || m1 == n {
            continue;
        }
        sum += coeffs.coeff(m1) * coeffs.coeff(-m1) / ((n + m1) * (n - m1)) as f64;
    }
    sum *= a * a / (2.0 * PI * PI);
    let p = Profiles::new(coeffs, n);
    let integral = -a * a * ExpSeries::mean_of_product(&[&p.g_plus, &p.g_plus, &theta(2 * n)]);
    Ok(IdentityResult::new(IdentityName::AProfile, m, sum, integral))
}

/// Double sum `Σ num(m₁, m₂) / den(m₁, m₂)` over pairs of support indices,
/// skipping zero denominators and pairs rejected by `keep`.
fn double_sum(
    outer: &[i64],
    inner: &[i64],
    num: impl Fn(i64, i64) -> Complex64,
    den: impl Fn(i64, i64) -> i64,
    keep: impl Fn(i64, i64) -> bool,
) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for &x in outer {
        for &y in inner {
            let d = den(x, y);
            if d == 0 || !keep(x, y) {
                continue;
            }
            let v = num(x, y);
            if v != Complex64::new(0.0, 0.0) {
                s += v / d as f64;
            }
        }
    }
    s
}

/// Raw sums `S₁…S₄`, `I₁…I₃`; `restricted` limits both indices to `∉ {0, N}`.
pub fn si_sums(coeffs: &FourierTable, m: usize, restricted: bool) -> ([Complex64; 4], [Complex64; 3]) {
    let n = band_n(m);
    let c = |k: i64| coeffs.coeff(k);
    let support = coeffs.support();
    // S: c_{m₁} c_{n₂−m₁} c_{−n₂} with m₁ and −n₂ both in the support
    let s_num = |m1: i64, n2: i64| c(m1) * c(n2 - m1) * c(-n2);
    let s_outer = support.clone();
    let s_inner: Vec<i64> = support.iter().map(|k| -k).collect();
    // I: c_{m₁} c_{m₂} c_{N−m₁−m₂}
    let i_num = |m1: i64, m2: i64| c(m1) * c(m2) * c(n - m1 - m2);
    let keep = |x: i64, y: i64| !restricted || (x != 0 && x != n && y != 0 && y != n);
    let s = [
        double_sum(&s_outer, &s_inner, s_num, |m1, n2| m1 * n2, keep),
        double_sum(&s_outer, &s_inner, s_num, |m1, n2| n2 * (n - m1), keep),
        double_sum(&s_outer, &s_inner, s_num, |m1, n2| m1 * (n - n2), keep),
        double_sum(&s_outer, &s_inner, s_num, |m1, n2| (n - m1) * (n - n2), keep),
    ];
    let i = [
        double_sum(&support, &support, i_num, |m1, m2| m1 * m2, keep),
        double_sum(&support, &support, i_num, |m1, m2| m2 * (n - m1), keep),
        double_sum(&support, &support, i_num, |m1, m2| (n - m1) * (n - m2), keep),
    ];
    (s, i)
}

/// `S(m) = Σ c_{m₁}c_{m₂−m₁}c_{−m₂} / (m₁(N−m₁)m₂(N−m₂))`, `m₁, m₂ ∉ {0, N}`.
pub fn s_of_m(coeffs: &FourierTable, m: usize) -> Complex64 {
    let n = band_n(m);
    let c = |k: i64| coeffs.coeff(k);
    let support = coeffs.support();
    let inner: Vec<i64> = support.iter().map(|k| -k).collect();
    double_sum(
        &support,
        &inner,
        |m1, m2| c(m1) * c(m2 - m1) * c(-m2),
        |m1, m2| m1 * (n - m1) * m2 * (n - m2),
        |_, _| true,
    )
}

/// `I(m) = Σ c_{k₁}c_{k₂}c_{N−k₁−k₂} / (k₁(N−k₁)k₂(N−k₂))`, `k₁, k₂ ∉ {0, N}`.
pub fn i_of_m(coeffs: &FourierTable, m: usize) -> Complex64 {
    let n = band_n(m);
    let c = |k: i64| coeffs.coeff(k);
    let support = coeffs.support();
    double_sum(
        &support,
        &support,
        |k1, k2| c(k1) * c(k2) * c(n - k1 - k2),
        |k1, k2| k1 * (n - k1) * k2 * (n - k2),
        |_, _| true,
    )
}

/// The seven `S_j`/`I_j` identities plus both assembly checks.
#[allow(non_snake_case)]
pub fn check_SI_suite(coeffs: &FourierTable, m: usize) -> Result<Vec<IdentityResult>> {
    require_finite(coeffs)?;
    let n = band_n(m);
    let p = Profiles::new(coeffs, n);
    let big_p = 4.0 * PI * PI;
    let mean = ExpSeries::mean_of_product;
    let (th_n, th_mn) = (theta(n), theta(-n));
    let (s, i) = si_sums(coeffs, m, false);
    let integrals_s = [
        -big_p * mean(&[&p.q_tilde, &p.q_tilde, &p.q]),
        -big_p * mean(&[&p.q_tilde, &p.g_plus, &p.q, &th_n]),
        -big_p * mean(&[&p.q_tilde, &p.g_minus, &p.q, &th_mn]),
        big_p * mean(&[&p.g_plus, &p.g_minus, &p.q]),
    ];
    let integrals_i = [
        -big_p * mean(&[&p.q_tilde, &p.q_tilde, &p.q, &th_mn]),
        big_p * mean(&[&p.q_tilde, &p.g_plus, &p.q]),
        -big_p * mean(&[&p.g_plus, &p.g_plus, &p.q, &th_n]),
    ];
    let s_names = [IdentityName::S1, IdentityName::S2, IdentityName::S3, IdentityName::S4];
    let i_names = [IdentityName::I1, IdentityName::I2, IdentityName::I3];
    let mut out: Vec<IdentityResult> = s_names
        .iter()
        .zip(s.iter().zip(&integrals_s))
        .map(|(&name, (&sv, &iv))| IdentityResult::new(name, m, sv, iv))
        .collect();
    out.extend(
        i_names
            .iter()
            .zip(i.iter().zip(&integrals_i))
            .map(|(&name, (&sv, &iv))| IdentityResult::new(name, m, sv, iv)),
    );

    let nf2 = (n * n) as f64;
    let (sr, ir) = si_sums(coeffs, m, true);
    let s_assembled = (sr[0] + sr[1] + sr[2] + sr[3]) / nf2;
    let i_assembled = (ir[0] + ir[1] * 2.0 + ir[2]) / nf2;
    out.push(IdentityResult::new(IdentityName::SAssembly, m, s_of_m(coeffs, m), s_assembled));
    out.push(IdentityResult::new(IdentityName::IAssembly, m, i_of_m(coeffs, m), i_assembled));
    Ok(out)
}

/// All identities for one band, the two profile identities first.
pub fn check_all(coeffs: &FourierTable, m: usize) -> Result<Vec<IdentityResult>> {
    let mut out = vec![check_a_identity(coeffs, m)?, check_b_identity(coeffs, m)?];
    out.extend(check_SI_suite(coeffs, m)?);
    Ok(out)
}
