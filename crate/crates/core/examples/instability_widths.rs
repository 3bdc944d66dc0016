//! Gap widths against `|c_N|`, the simplicity test and the coefficient
//! conditions for a square-wave potential.

use hillgap::perturbation::{condition_report, gap_report, rho_sequence, series_table, simplicity_check};
use hillgap::{band_spectrum, BandIndex, BoundaryCondition, Potential};

fn main() -> hillgap::Result<()> {
    let q = Potential::square(1.0, 1.0);
    let (m_min, m_max) = (1, 12);
    let ms: Vec<usize> = (m_min..=m_max).collect();
    for bc in [BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic] {
        let spec = band_spectrum(&q, bc, m_max, None)?;
        let pairs = &spec.pairs[m_min..=m_max];
        let table = series_table(&q, BandIndex::new(bc, m_max, q.period()).n)?;
        let rho = rho_sequence(&q, bc, &ms, 1024)?;
        let gaps = gap_report(pairs, &table)?.with_rho(&rho);
        let simple = simplicity_check(pairs, &table, &rho, 1.0, 1e-10)?;
        println!("{}", bc.as_str());
        for (g, s) in gaps.entries.iter().zip(&simple) {
            println!(
                "  m = {:2}  gap {:.6e}  |c_N| {:.6e}  gap/2|c_N| {:>9}  simple {}",
                g.m,
                g.gap,
                g.c_abs,
                g.normalized_full.map_or("-".into(), |v| format!("{v:.6}")),
                s.simple
            );
        }
        let cond = condition_report(&q, bc, &ms, 0.25, 1024)?;
        println!(
            "  ρ decay {:?}  ρ comparable {:?}  coefficient floor {:?}",
            cond.rho_decay.holds, cond.rho_comparable.holds, cond.coefficient_floor.holds
        );
    }
    Ok(())
}
