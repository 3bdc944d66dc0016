//! TOML run configuration.
//!
//! ```toml
//! [potential]
//! kind = "mathieu"        # zero | mathieu | square | harmonic_decay | single_harmonic
//! gamma = 1.0             #   | trig | piecewise | sampled, or e.g. "mathieu(1.0)"
//! period = 3.141592653589793
//!
//! [bands]
//! bc = "both"             # periodic | antiperiodic | both
//! m_min = 5
//! m_max = 24
//! truncation = 200        # K, optional
//! series_truncation = 64  # M₁, optional
//!
//! [tolerances]
//! eigen = 1e-10
//! ode = 1e-10
//! epsilon = 0.25
//! rho_grid = 1024
//!
//! [output]
//! format = "csv"          # csv | json
//! path = "out/run.csv"    # optional; stdout otherwise
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use super::CliError;
use crate::potential::{Potential, DEFAULT_RHO_GRID};
use crate::spectrum::{default_truncation, BandIndex, BoundaryCondition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BcSelection {
    Periodic,
    Antiperiodic,
    Both,
}

impl BcSelection {
    pub fn list(self) -> Vec<BoundaryCondition> {
        match self {
            BcSelection::Periodic => vec![BoundaryCondition::Periodic],
            BcSelection::Antiperiodic => vec![BoundaryCondition::Antiperiodic],
            BcSelection::Both => vec![BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialSection {
    kind: String,
    period: Option<f64>,
    gamma: Option<f64>,
    alpha: Option<f64>,
    harmonics: Option<usize>,
    index: Option<i64>,
    /// `(k, re, im)` triples
    coefficients: Option<Vec<(i64, f64, f64)>>,
    breakpoints: Option<Vec<f64>>,
    values: Option<Vec<f64>>,
    samples: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BandsSection {
    bc: Option<BcSelection>,
    m_min: Option<usize>,
    m_max: Option<usize>,
    truncation: Option<usize>,
    series_truncation: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolerancesSection {
    eigen: Option<f64>,
    ode: Option<f64>,
    epsilon: Option<f64>,
    rho_grid: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    format: Option<Format>,
    path: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    potential: PotentialSection,
    #[serde(default)]
    bands: BandsSection,
    #[serde(default)]
    tolerances: TolerancesSection,
    #[serde(default)]
    output: OutputSection,
}

/// Validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: Potential,
    pub bcs: Vec<BoundaryCondition>,
    pub m_min: usize,
    pub m_max: usize,
    pub truncation: usize,
    pub series_truncation: Option<usize>,
    pub eigen_tol: f64,
    pub ode_tol: f64,
    pub epsilon: f64,
    pub rho_grid: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub m_range: Option<(usize, usize)>,
    pub truncation: Option<usize>,
}

fn field(name: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{name}: {msg}"))
}

/// Parses `a:b` into an inclusive band range.
pub fn parse_m_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a = a.trim().parse::<usize>().map_err(|e| format!("bad m_min {a:?}: {e}"))?;
    let b = b.trim().parse::<usize>().map_err(|e| format!("bad m_max {b:?}: {e}"))?;
    Ok((a, b))
}

/// Splits `name(x, y)` into the name and its numeric arguments.
fn split_call(kind: &str) -> Result<(String, Vec<f64>), CliError> {
    let kind = kind.trim();
    match kind.find('(') {
        None => Ok((kind.to_ascii_lowercase(), Vec::new())),
        Some(open) => {
            let inner = kind[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| field("potential.kind", format!("unbalanced parentheses in {kind:?}")))?;
            let args = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<f64>().map_err(|e| field("potential.kind", format!("argument {s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((kind[..open].trim().to_ascii_lowercase(), args))
        }
    }
}

fn build_potential(p: &PotentialSection) -> Result<Potential, CliError> {
    let (name, args) = split_call(&p.kind)?;
    let default_period = if name == "mathieu" { std::f64::consts::PI } else { 1.0 };
    let period = p.period.unwrap_or(default_period);
    if !(period > 0.0 && period.is_finite()) {
        return Err(field("potential.period", format!("must be positive, got {period}")));
    }
    let arg = |i: usize, key: &str, named: Option<f64>| -> Result<f64, CliError> {
        named
            .or_else(|| args.get(i).copied())
            .ok_or_else(|| field(&format!("potential.{key}"), format!("required for kind {name:?}")))
    };
    let finite = |key: &str, v: f64| -> Result<f64, CliError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(field(&format!("potential.{key}"), "must be finite"))
        }
    };
    let invalid = |key: &str, e: crate::HillError| field(&format!("potential.{key}"), e);
    match name.as_str() {
        "zero" => Ok(Potential::zero(period)),
        "mathieu" => Ok(Potential::mathieu(finite("gamma", arg(0, "gamma", p.gamma)?)?, period)),
        "square" => Ok(Potential::square(finite("gamma", arg(0, "gamma", p.gamma)?)?, period)),
        "harmonic_decay" => {
            let alpha = finite("alpha", arg(0, "alpha", p.alpha)?)?;
            let k = arg(1, "harmonics", p.harmonics.map(|h| h as f64))?;
            if !(k >= 1.0 && k.fract() == 0.0 && k <= 4096.0) {
                return Err(field("potential.harmonics", format!("must be an integer in [1, 4096], got {k}")));
            }
            Ok(Potential::harmonic_decay(alpha, k as usize, period))
        }
        "single_harmonic" => {
            let idx = arg(0, "index", p.index.map(|i| i as f64))?;
            if idx.fract() != 0.0 || idx == 0.0 {
                return Err(field("potential.index", format!("must be a nonzero integer, got {idx}")));
            }
            let gamma = finite("gamma", arg(1, "gamma", p.gamma)?)?;
            Ok(Potential::single_harmonic(idx as i64, gamma, period))
        }
        "trig" => {
            let coeffs = p.coefficients.as_ref().ok_or_else(|| field("potential.coefficients", "required for trig"))?;
            let terms: Vec<(i64, Complex64)> = coeffs.iter().map(|&(k, re, im)| (k, Complex64::new(re, im))).collect();
            Potential::trig(period, &terms).map_err(|e| invalid("coefficients", e))
        }
        "piecewise" => {
            let bp = p.breakpoints.as_ref().ok_or_else(|| field("potential.breakpoints", "required for piecewise"))?;
            let vals = p.values.as_ref().ok_or_else(|| field("potential.values", "required for piecewise"))?;
            Potential::piecewise(period, bp, vals).map_err(|e| invalid("breakpoints", e))
        }
        "sampled" => {
            let s = p.samples.as_ref().ok_or_else(|| field("potential.samples", "required for sampled"))?;
            Potential::sampled(period, s).map_err(|e| invalid("samples", e))
        }
        other => Err(field("potential.kind", format!("unknown potential {other:?}"))),
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(format!("config: {}", e.message())))?;
        Self::from_raw(raw, overrides)
    }

    pub fn from_path(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("config: cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text, overrides)
    }

    fn from_raw(raw: RawConfig, ov: &Overrides) -> Result<Self, CliError> {
        let potential = build_potential(&raw.potential)?;
        let bcs = raw.bands.bc.unwrap_or(BcSelection::Periodic).list();
        let (m_min, m_max) =
            ov.m_range.unwrap_or((raw.bands.m_min.unwrap_or(5), raw.bands.m_max.unwrap_or(24)));
        if m_min < 1 {
            return Err(field("bands.m_min", "must be >= 1"));
        }
        if m_max > 64 {
            return Err(field("bands.m_max", format!("must be <= 64, got {m_max}")));
        }
        if m_min > m_max {
            return Err(field("bands.m_min", format!("{m_min} exceeds m_max = {m_max}")));
        }
        let n_max = BandIndex::new(BoundaryCondition::Periodic, m_max, 1.0).n;
        let truncation = ov.truncation.or(raw.bands.truncation).unwrap_or_else(|| default_truncation(n_max));
        if truncation < 4 * n_max {
            return Err(field(
                "bands.truncation",
                format!("K = {truncation} must be >= 4(2·m_max+2) = {}", 4 * n_max),
            ));
        }
        if let Some(0) = raw.bands.series_truncation {
            return Err(field("bands.series_truncation", "must be >= 1"));
        }
        let eigen_tol = raw.tolerances.eigen.unwrap_or(1e-10);
        if !(eigen_tol > 0.0 && eigen_tol < 1e-3) {
            return Err(field("tolerances.eigen", format!("must lie in (0, 1e-3), got {eigen_tol}")));
        }
        let ode_tol = raw.tolerances.ode.unwrap_or(1e-10);
        if !(1e-11..=1e-4).contains(&ode_tol) {
            return Err(field("tolerances.ode", format!("must lie in [1e-11, 1e-4], got {ode_tol}")));
        }
        let epsilon = raw.tolerances.epsilon.unwrap_or(crate::perturbation::DEFAULT_EPSILON);
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(field("tolerances.epsilon", format!("must be finite and >= 0, got {epsilon}")));
        }
        let rho_grid = raw.tolerances.rho_grid.unwrap_or(DEFAULT_RHO_GRID);
        if rho_grid < 64 {
            return Err(field("tolerances.rho_grid", format!("must be >= 64, got {rho_grid}")));
        }
        Ok(Self {
            potential,
            bcs,
            m_min,
            m_max,
            truncation,
            series_truncation: raw.bands.series_truncation,
            eigen_tol,
            ode_tol,
            epsilon,
            rho_grid,
            format: ov.format.or(raw.output.format).unwrap_or(Format::Csv),
            out: ov.out.clone().or(raw.output.path),
        })
    }

    pub fn ms(&self) -> Vec<usize> {
        (self.m_min..=self.m_max).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, CliError> {
        RunConfig::from_toml_str(text, &Overrides::default())
    }

    #[test]
    fn named_forms() {
        let c = parse("[potential]\nkind = \"mathieu(0.5)\"\n").unwrap();
        assert_eq!(c.potential, Potential::mathieu(0.5, std::f64::consts::PI));
        assert_eq!((c.m_min, c.m_max, c.truncation), (5, 24, 200));
        let c = parse("[potential]\nkind = \"harmonic_decay\"\nalpha = 1.0\nharmonics = 64\n").unwrap();
        assert_eq!(c.potential, Potential::harmonic_decay(1.0, 64, 1.0));
        let c = parse("[potential]\nkind = \"trig\"\ncoefficients = [[1, 0.5, 0.0], [-1, 0.5, 0.0]]\n").unwrap();
        assert_eq!(c.potential, Potential::mathieu(0.5, 1.0));
    }

    #[test]
    fn field_level_errors() {
        let msg = |t: &str| match parse(t) {
            Err(CliError::Config(m)) => m,
            other => panic!("expected config error, got {other:?}"),
        };
        assert!(msg("[potential]\nkind = \"zero\"\n[bands]\nm_min = 0\n").starts_with("bands.m_min"));
        assert!(msg("[potential]\nkind = \"zero\"\n[bands]\nm_max = 65\n").starts_with("bands.m_max"));
        assert!(msg("[potential]\nkind = \"zero\"\n[bands]\nm_max = 10\ntruncation = 40\n").starts_with("bands.truncation"));
        assert!(msg("[potential]\nkind = \"blob\"\n").starts_with("potential.kind"));
        assert!(msg("[potential]\nkind = \"square\"\n").starts_with("potential.gamma"));
        assert!(msg("[potential]\nkind = \"trig\"\ncoefficients = [[1, 1.0, 0.0]]\n").starts_with("potential.coefficients"));
        assert!(msg("[potential]\nkind = \"zero\"\nperiod = -1.0\n").starts_with("potential.period"));
        assert!(msg("[potential]\nkind = \"zero\"\n[bands]\nbogus = 1\n").starts_with("config"));
    }

    #[test]
    fn overrides_win() {
        let ov = Overrides { m_range: Some((2, 3)), truncation: Some(64), format: Some(Format::Json), out: None };
        let c = RunConfig::from_toml_str("[potential]\nkind = \"zero\"\n[output]\nformat = \"csv\"\n", &ov).unwrap();
        assert_eq!((c.m_min, c.m_max, c.truncation, c.format), (2, 3, 64, Format::Json));
        assert_eq!(parse_m_range("1:8"), Ok((1, 8)));
        assert!(parse_m_range("18").is_err());
    }
}
