//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
//! any criterion failed. Built with `harness = false`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hillgap::identities::{check_all, IdentityName, IDENTITY_TOL};
use hillgap::kernels::fit::max_min_ratio;
use hillgap::perturbation::{
    asym_report, gap_report, rho_sequence, series_table, series_terms, simplicity_check,
};
use hillgap::spectrum::refine_spectrum;
use hillgap::{
    band_spectrum, mode_decomposition, BandIndex, BoundaryCondition, FourierTable, Potential, Result,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use BoundaryCondition::{Antiperiodic, Periodic};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn free_degeneracy() -> Result<Outcome> {
    let q = Potential::zero(PI);
    let spec = band_spectrum(&q, Periodic, 8, None)?;
    let (mut worst_pos, mut worst_gap) = (0.0f64, 0.0f64);
    for p in &spec.pairs[1..=8] {
        let n2 = (p.band.n * p.band.n) as f64;
        worst_pos = worst_pos.max((p.lower - n2).abs()).max((p.upper - n2).abs());
        worst_gap = worst_gap.max(p.gap);
    }
    outcome(
        worst_pos <= 1e-8 && worst_gap <= 1e-9,
        format!("max |λ − N²| = {worst_pos:.2e}, max gap = {worst_gap:.2e}"),
    )
}

fn cross_method() -> Result<Outcome> {
    let q = Potential::mathieu(1.0, PI);
    let mut worst = 0.0f64;
    for bc in [Periodic, Antiperiodic] {
        let spec = band_spectrum(&q, bc, 5, Some(64))?;
        let (ground, pairs) = refine_spectrum(&q, &spec, 1e-10)?;
        let mut galerkin = Vec::new();
        let mut shooting = Vec::new();
        if let (Some(g), Some(s)) = (spec.ground_state, ground) {
            galerkin.push(g);
            shooting.push(s);
        }
        for (g, s) in spec.pairs.iter().zip(&pairs) {
            galerkin.extend([g.lower, g.upper]);
            shooting.extend([s.lower, s.upper]);
        }
        for (g, s) in galerkin.iter().zip(&shooting).take(12) {
            worst = worst.max((g - s).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |Galerkin − shooting| = {worst:.2e} over 24 eigenvalues"))
}

fn leading_term() -> Result<Outcome> {
    let mut devs = Vec::new();
    for g in [0.2, 0.1, 0.05] {
        let q = Potential::single_harmonic(10, g, 1.0);
        let spec = band_spectrum(&q, Periodic, 4, None)?;
        devs.push(spec.pairs[4].gap / (2.0 * g) - 1.0);
    }
    let within = devs.iter().all(|d| d.abs() <= 0.15);
    let shrinks = devs.windows(2).all(|w| w[1].abs() <= 0.7 * w[0].abs());
    outcome(
        within && shrinks,
        format!("gap/(2γ) − 1 = {:.3e}, {:.3e}, {:.3e}", devs[0], devs[1], devs[2]),
    )
}

struct DecayFamily {
    pairs: Vec<hillgap::EigenPair>,
    table: FourierTable,
    rho: Vec<f64>,
}

fn decay_family(m_lo: usize, m_hi: usize) -> Result<DecayFamily> {
    let q = Potential::harmonic_decay(1.0, 64, 1.0);
    let spec = band_spectrum(&q, Periodic, m_hi, None)?;
    let ms: Vec<usize> = (m_lo..=m_hi).collect();
    Ok(DecayFamily {
        pairs: spec.pairs[m_lo..=m_hi].to_vec(),
        table: series_table(&q, BandIndex::new(Periodic, m_hi, 1.0).n)?,
        rho: rho_sequence(&q, Periodic, &ms, hillgap::potential::DEFAULT_RHO_GRID)?,
    })
}

fn improved_error_law(fam: &DecayFamily) -> Result<Outcome> {
    let rep = asym_report(&fam.pairs, &fam.table, &fam.rho, false)?;
    let spread = rep.spread_lower.unwrap_or(f64::INFINITY).max(rep.spread_upper.unwrap_or(f64::INFINITY));
    let slope = rep.slope_lower.unwrap_or(0.0).max(rep.slope_upper.unwrap_or(0.0));
    outcome(
        spread <= 50.0 && slope < -0.7,
        format!(
            "slopes {:.3}, {:.3}; scaled-residual max/min {:.3}, {:.3}",
            rep.slope_lower.unwrap_or(f64::NAN),
            rep.slope_upper.unwrap_or(f64::NAN),
            rep.spread_lower.unwrap_or(f64::NAN),
            rep.spread_upper.unwrap_or(f64::NAN)
        ),
    )
}

fn gap_normalization(fam: &DecayFamily) -> Result<Outcome> {
    let rep = gap_report(&fam.pairs[3..], &fam.table)?;
    let both = rep.entries.iter().all(|e| e.normalized_half.is_some() && e.normalized_full.is_some());
    let dev = rep.max_half_deviation().unwrap_or(f64::INFINITY);
    outcome(both && dev <= 0.2, format!("max |ℓ/(2|c_N|) − 1| = {dev:.3e} for m ∈ [8, 24]"))
}

fn simplicity(fam: &DecayFamily) -> Result<Outcome> {
    let entries = simplicity_check(&fam.pairs, &fam.table, &fam.rho, 0.0, 1e-10)?;
    let mut worst = f64::INFINITY;
    for (p, e) in fam.pairs.iter().zip(&entries) {
        let c_abs = fam.table.coeff(p.band.n as i64).norm();
        worst = worst.min(p.gap / (0.5 * c_abs));
        if !e.hypothesis {
            return outcome(false, format!("c_N vanishes at m = {}", e.m));
        }
    }
    outcome(worst > 1.0, format!("min gap/(0.5|c_N|) = {worst:.3}"))
}

fn random_table(rng: &mut ChaCha8Rng) -> FourierTable {
    let hw = rng.gen_range(1..=8i64);
    let mut terms = Vec::new();
    for k in 1..=hw {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        terms.push((k, c));
        terms.push((-k, c.conj()));
    }
    FourierTable::from_terms(1.0, &terms)
}

fn identity_suite() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for _ in 0..20 {
        let table = random_table(&mut rng);
        let m = rng.gen_range(2..=16usize);
        for r in check_all(&table, m)? {
            if !matches!(r.name, IdentityName::SAssembly | IdentityName::IAssembly) {
                worst = worst.max(r.abs_diff);
                count += 1;
            }
        }
    }
    outcome(worst <= IDENTITY_TOL, format!("{count} checks, max abs_diff = {worst:.2e}"))
}

fn eigenfunction_structure() -> Result<Outcome> {
    let q = Potential::mathieu(1.0, PI);
    let spec = band_spectrum(&q, Periodic, 24, None)?;
    let (mut defect, mut h) = (Vec::new(), Vec::new());
    for m in 5..=24 {
        for v in &spec.vectors[m] {
            let d = mode_decomposition(v, &spec.pairs[m].band)?;
            let mf = m as f64;
            defect.push(d.principal_defect().abs() * mf * mf);
            h.push(d.h_norm * mf);
        }
    }
    let rd = max_min_ratio(&defect).unwrap_or(f64::INFINITY);
    let rh = max_min_ratio(&h).unwrap_or(f64::INFINITY);
    let c_fit = defect.iter().copied().fold(0.0, f64::max);
    outcome(
        rd <= 50.0 && rh <= 50.0,
        format!("|defect|·m² ≤ {c_fit:.3e} (max/min {rd:.2}), ‖h‖·m max/min {rh:.2}"),
    )
}

fn riemann_lebesgue() -> Result<Outcome> {
    let q = Potential::square(1.0, 1.0);
    let ms: Vec<usize> = (5..=40).collect();
    let rho = rho_sequence(&q, Periodic, &ms, hillgap::potential::DEFAULT_RHO_GRID)?;
    let (r5, r40) = (rho[0], rho[rho.len() - 1]);
    let min_mrho = ms.iter().zip(&rho).map(|(&m, r)| m as f64 * r).fold(f64::INFINITY, f64::min);
    outcome(
        r40 < 0.5 * r5 && min_mrho > 0.01,
        format!("ρ(5) = {r5:.4e}, ρ(40) = {r40:.4e}, min m·ρ(m) = {min_mrho:.4e}"),
    )
}

fn antiperiodic_analogue() -> Result<Outcome> {
    let g = 0.1;
    let q = Potential::single_harmonic(9, g, 1.0);
    let spec = band_spectrum(&q, Antiperiodic, 4, None)?;
    let p = &spec.pairs[4];
    let ratio = p.gap / (2.0 * g);
    outcome(
        p.band.n == 9 && (0.85..=1.15).contains(&ratio),
        format!("N = {}, gap/(2γ) = {ratio:.6}", p.band.n),
    )
}

fn series_reindexing() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let table = random_table(&mut rng);
        let m = rng.gen_range(2..=16usize);
        let band = BandIndex::new(Periodic, m, 1.0);
        let lambda = band.center + table.coeff(band.n as i64).norm();
        let s = series_terms(&table, &band, lambda, None)?;
        worst = worst.max((s.a_val - s.a_prime).norm());
    }
    outcome(worst <= 1e-10, format!("max |a − a′| = {worst:.2e}"))
}

fn main() -> ExitCode {
    let mut failures = 0;
    // `carried` is shared setup time charged to this criterion
    let mut report = |id: usize,
                      name: &str,
                      limit: Option<Duration>,
                      carried: Duration,
                      run: &mut dyn FnMut() -> Result<Outcome>| {
        let t0 = Instant::now();
        let res = run();
        let dt = t0.elapsed() + carried;
        let slow = limit.is_some_and(|l| dt > l);
        let (pass, detail) = match res {
            Ok(o) => (o.pass && !slow, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" / {:.0} s", l.as_secs_f64()));
        println!(
            "criterion {id:>2} {:<4} {name}: {detail} [{:.2} s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            dt.as_secs_f64()
        );
    };
    let secs = |s: u64| Some(Duration::from_secs(s));

    report(1, "free-potential degeneracy", secs(1), Duration::ZERO, &mut free_degeneracy);
    report(2, "Galerkin/shooting agreement", secs(10), Duration::ZERO, &mut cross_method);
    report(3, "leading term, single harmonic", secs(5), Duration::ZERO, &mut leading_term);

    let t0 = Instant::now();
    let fam = decay_family(5, 24);
    let setup = t0.elapsed();
    match fam {
        Ok(fam) => {
            report(4, "improved error law", secs(60), setup, &mut || {
                improved_error_law(&fam)
            });
            report(5, "gap normalization", None, Duration::ZERO, &mut || gap_normalization(&fam));
            report(6, "simplicity", None, Duration::ZERO, &mut || simplicity(&fam));
        }
        Err(e) => {
            for (id, name) in [(4, "improved error law"), (5, "gap normalization"), (6, "simplicity")] {
                report(id, name, None, setup, &mut || Err(e.clone()));
            }
        }
    }
    report(7, "identity suite", secs(10), Duration::ZERO, &mut identity_suite);
    report(8, "eigenfunction structure", None, Duration::ZERO, &mut eigenfunction_structure);
    report(9, "Riemann-Lebesgue decay and lower bound", None, Duration::ZERO, &mut riemann_lebesgue);
    report(10, "antiperiodic analogue", None, Duration::ZERO, &mut antiperiodic_analogue);
    report(11, "series reindexing", None, Duration::ZERO, &mut series_reindexing);

    if failures == 0 {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
