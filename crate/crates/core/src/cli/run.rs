//! Subcommand implementations. Each returns a list of tables; rows are
//! ordered by boundary condition, then band index.

use super::config::RunConfig;
use super::output::{Cell, Table};
use super::CliError;
use crate::identities::{check_all, IDENTITY_TOL};
use crate::perturbation::{
    asym_report, condition_report_from, gap_report, rho_sequence, series_table, simplicity_check, AsymReport,
    ConditionReport, GapReport, Verdict,
};
use crate::potential::FourierTable;
use crate::spectrum::{band_spectrum, refine_ground_state, refine_pair_shooting, BandIndex, BoundaryCondition, EigenPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    /// Fourier coefficients and ρ(m)
    Coeffs,
    /// band edges by the Galerkin and shooting methods
    Spectrum,
    /// instability-interval widths against 2|c_N|
    Gaps,
    /// asymptotic residuals, condition diagnostics and simplicity
    Asym,
    /// sum/integral identities (trigonometric polynomials only)
    Identities,
    /// every table above
    Report,
}

/// Galerkin edges, series table and `ρ(m)` for one boundary condition.
struct BcData {
    bc: BoundaryCondition,
    ground_state: Option<f64>,
    pairs: Vec<EigenPair>,
    table: FourierTable,
    rho: Option<Vec<f64>>,
}

struct Session<'a> {
    cfg: &'a RunConfig,
    data: Vec<BcData>,
}

impl<'a> Session<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        let mut data = Vec::new();
        for &bc in &cfg.bcs {
            let spec = band_spectrum(&cfg.potential, bc, cfg.m_max, Some(cfg.truncation))?;
            let pairs = spec.pairs[cfg.m_min..=cfg.m_max].to_vec();
            let n_max = BandIndex::new(bc, cfg.m_max, cfg.potential.period()).n;
            let table = series_table(&cfg.potential, n_max)?;
            data.push(BcData { bc, ground_state: spec.ground_state, pairs, table, rho: None });
        }
        Ok(Self { cfg, data })
    }

    fn rho(&mut self) -> Result<(), CliError> {
        let ms = self.cfg.ms();
        for d in &mut self.data {
            if d.rho.is_none() {
                d.rho = Some(rho_sequence(&self.cfg.potential, d.bc, &ms, self.cfg.rho_grid)?);
            }
        }
        Ok(())
    }
}

fn bc_cell(bc: BoundaryCondition) -> Cell {
    bc.as_str().into()
}

fn coeffs_tables(s: &mut Session<'_>) -> Result<Vec<Table>, CliError> {
    let q = &s.cfg.potential;
    let n_max = BandIndex::new(BoundaryCondition::Periodic, s.cfg.m_max, q.period()).n as i64;
    let mut coeffs = Table::new("coefficients", &["k", "re", "im", "abs", "quad_error"]);
    for k in -n_max..=n_max {
        let (c, err) = q.fourier_coefficient_with_error(k)?;
        coeffs.push(vec![k.into(), c.re.into(), c.im.into(), c.norm().into(), err.into()]);
    }
    s.rho()?;
    let mut rho = Table::new("rho", &["bc", "m", "n", "c_abs", "rho"]);
    for d in &s.data {
        for (p, r) in d.pairs.iter().zip(d.rho.as_deref().unwrap_or_default()) {
            let c_abs = d.table.coeff(p.band.n as i64).norm();
            rho.push(vec![bc_cell(d.bc), p.band.m.into(), p.band.n.into(), c_abs.into(), (*r).into()]);
        }
    }
    Ok(vec![coeffs, rho])
}

const PAIR_COLUMNS: [&str; 10] = ["bc", "m", "n", "center", "method", "lower", "upper", "gap", "degenerate", "isolated"];

fn pair_row(p: &EigenPair) -> Vec<Cell> {
    vec![
        bc_cell(p.band.bc),
        p.band.m.into(),
        p.band.n.into(),
        p.band.center.into(),
        p.method.as_str().into(),
        p.lower.into(),
        p.upper.into(),
        p.gap.into(),
        p.degenerate.into(),
        p.isolated.into(),
    ]
}

fn spectrum_tables(s: &mut Session<'_>) -> Result<Vec<Table>, CliError> {
    let q = &s.cfg.potential;
    let tol = s.cfg.ode_tol;
    let mut pairs = Table::new("pairs", &PAIR_COLUMNS);
    let mut ground = Table::new("ground_state", &["bc", "method", "lambda"]);
    for d in &s.data {
        if let Some(g) = d.ground_state {
            ground.push(vec![bc_cell(d.bc), "galerkin".into(), g.into()]);
            ground.push(vec![bc_cell(d.bc), "shooting".into(), refine_ground_state(q, g, tol)?.into()]);
        }
        for p in &d.pairs {
            pairs.push(pair_row(p));
            pairs.push(pair_row(&refine_pair_shooting(q, p, tol)?));
        }
    }
    let mut out = vec![pairs];
    if !ground.rows.is_empty() {
        out.push(ground);
    }
    Ok(out)
}

fn gap_reports(s: &mut Session<'_>) -> Result<Vec<GapReport>, CliError> {
    s.rho()?;
    s.data
        .iter()
        .map(|d| Ok(gap_report(&d.pairs, &d.table)?.with_rho(d.rho.as_deref().unwrap_or_default())))
        .collect()
}

fn gaps_table(reports: &[GapReport]) -> Table {
    let mut t = Table::new(
        "gaps",
        &["bc", "m", "n", "gap", "c_abs", "normalized_half", "normalized_full", "residual", "rho", "scaled_residual"],
    );
    for e in reports.iter().flat_map(|r| &r.entries) {
        t.push(vec![
            bc_cell(e.bc),
            e.m.into(),
            e.n.into(),
            e.gap.into(),
            e.c_abs.into(),
            e.normalized_half.into(),
            e.normalized_full.into(),
            e.residual.into(),
            e.rho.into(),
            e.scaled_residual.into(),
        ]);
    }
    t
}

const SIMPLICITY_COLUMNS: [&str; 7] = ["bc", "m", "gap", "threshold", "margin", "simple", "hypothesis"];

struct AsymBundle {
    asym: AsymReport,
    conditions: ConditionReport,
    simplicity: Table,
}

fn asym_bundles(s: &mut Session<'_>) -> Result<Vec<(BoundaryCondition, AsymBundle)>, CliError> {
    s.rho()?;
    let ms = s.cfg.ms();
    let mut out = Vec::new();
    for d in &s.data {
        let rho = d.rho.as_deref().unwrap_or_default();
        let asym = asym_report(&d.pairs, &d.table, rho, true)?;
        let conditions = condition_report_from(&d.table, d.bc, &ms, rho, s.cfg.epsilon)?;
        let mut t = Table::new("simplicity", &SIMPLICITY_COLUMNS);
        let c_fit = asym.fitted_constant.unwrap_or(0.0);
        for e in simplicity_check(&d.pairs, &d.table, rho, c_fit, s.cfg.eigen_tol)? {
            t.push(vec![
                bc_cell(d.bc),
                e.m.into(),
                e.gap.into(),
                e.threshold.into(),
                e.margin.into(),
                e.simple.into(),
                e.hypothesis.into(),
            ]);
        }
        out.push((d.bc, AsymBundle { asym, conditions, simplicity: t }));
    }
    Ok(out)
}

fn asym_tables(bundles: &[(BoundaryCondition, AsymBundle)], gaps: &[GapReport]) -> Vec<Table> {
    let mut asym = Table::new(
        "asym",
        &[
            "bc",
            "m",
            "n",
            "center",
            "lower",
            "upper",
            "c_abs",
            "rho",
            "residual_lower",
            "residual_upper",
            "scaled_lower",
            "scaled_upper",
            "second_order_error",
            "r_bound",
        ],
    );
    let mut cond =
        Table::new("conditions", &["bc", "m", "n", "rho", "c_abs", "ratio_main", "ratio_sim", "eps_margin"]);
    let mut simplicity = Table::new("simplicity", &SIMPLICITY_COLUMNS);
    let mut summary = Table::new("summary", &["bc", "quantity", "value", "holds"]);
    for ((bc, b), gap) in bundles.iter().zip(gaps) {
        for e in &b.asym.entries {
            asym.push(vec![
                bc_cell(e.bc),
                e.m.into(),
                e.n.into(),
                e.center.into(),
                e.lower.into(),
                e.upper.into(),
                e.c_abs.into(),
                e.rho.into(),
                e.residual_lower.into(),
                e.residual_upper.into(),
                e.scaled_lower.into(),
                e.scaled_upper.into(),
                e.second_order_error.into(),
                e.r_bound.into(),
            ]);
        }
        for e in &b.conditions.entries {
            cond.push(vec![
                bc_cell(*bc),
                e.m.into(),
                e.n.into(),
                e.rho.into(),
                e.c_abs.into(),
                e.ratio_main.into(),
                e.ratio_sim.into(),
                e.eps_margin.into(),
            ]);
        }
        simplicity.rows.extend(b.simplicity.rows.iter().cloned());

        let a = &b.asym;
        let mut value = |name: &str, v: Option<f64>| summary.push(vec![bc_cell(*bc), name.into(), v.into(), Cell::Null]);
        value("slope_lower", a.slope_lower);
        value("slope_upper", a.slope_upper);
        value("spread_lower", a.spread_lower);
        value("spread_upper", a.spread_upper);
        value("fitted_constant", a.fitted_constant);
        value("second_order_wins", Some(a.second_order_wins));
        value("gap_scaled_residual_slope", gap.scaled_residual_fit.map(|f| f.slope));
        value("max_half_deviation", gap.max_half_deviation());
        value("epsilon", Some(b.conditions.epsilon));
        let mut verdict = |name: &str, v: Verdict| {
            summary.push(vec![bc_cell(*bc), name.into(), v.statistic.into(), v.holds.into()]);
        };
        verdict("rho_decay", b.conditions.rho_decay);
        verdict("rho_comparable", b.conditions.rho_comparable);
        verdict("coefficient_floor", b.conditions.coefficient_floor);
    }
    vec![asym, cond, simplicity, summary]
}

fn identities_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let n_max = BandIndex::new(BoundaryCondition::Periodic, cfg.m_max, cfg.potential.period()).n;
    let table = series_table(&cfg.potential, n_max)?;
    let mut t = Table::new(
        "identities",
        &["m", "identity", "sum_re", "sum_im", "integral_re", "integral_im", "abs_diff", "pass"],
    );
    for m in cfg.ms() {
        for r in check_all(&table, m)? {
            t.push(vec![
                m.into(),
                r.name.as_str().into(),
                r.sum_value.re.into(),
                r.sum_value.im.into(),
                r.integral_value.re.into(),
                r.integral_value.im.into(),
                r.abs_diff.into(),
                r.passes(IDENTITY_TOL).into(),
            ]);
        }
    }
    Ok(t)
}

pub fn run(cmd: Subcommand, cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    if cmd == Subcommand::Identities {
        return Ok(vec![identities_table(cfg)?]);
    }
    let mut s = Session::new(cfg)?;
    match cmd {
        Subcommand::Coeffs => coeffs_tables(&mut s),
        Subcommand::Spectrum => spectrum_tables(&mut s),
        Subcommand::Gaps => Ok(vec![gaps_table(&gap_reports(&mut s)?)]),
        Subcommand::Asym => {
            let gaps = gap_reports(&mut s)?;
            Ok(asym_tables(&asym_bundles(&mut s)?, &gaps))
        }
        Subcommand::Identities => unreachable!("handled above"),
        Subcommand::Report => {
            let mut out = coeffs_tables(&mut s)?;
            out.extend(spectrum_tables(&mut s)?);
            let gaps = gap_reports(&mut s)?;
            out.push(gaps_table(&gaps));
            out.extend(asym_tables(&asym_bundles(&mut s)?, &gaps));
            if cfg.potential.is_trig_polynomial() {
                out.push(identities_table(cfg)?);
            }
            Ok(out)
        }
    }
}
