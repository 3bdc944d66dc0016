//! Band-edge residuals against the `center ± |c_N|` prediction for a
//! potential with power-law harmonics, with fitted decay rates.

use hillgap::perturbation::{asym_report, rho_sequence, series_table};
use hillgap::{band_spectrum, BandIndex, BoundaryCondition, Potential};

fn main() -> hillgap::Result<()> {
    let bc = BoundaryCondition::Periodic;
    let q = Potential::harmonic_decay(1.0, 64, 1.0);
    let (m_min, m_max) = (5, 24);
    let spec = band_spectrum(&q, bc, m_max, None)?;
    let pairs = &spec.pairs[m_min..=m_max];
    let ms: Vec<usize> = (m_min..=m_max).collect();
    let n_max = BandIndex::new(bc, m_max, q.period()).n;
    let table = series_table(&q, n_max)?;
    let rho = rho_sequence(&q, bc, &ms, 1024)?;
    let report = asym_report(pairs, &table, &rho, true)?;
    println!("  m    |c_N|        res lower     res upper     second-order error");
    for e in &report.entries {
        println!(
            "{:3}  {:.4e}  {:+.4e}  {:+.4e}  {:.4e}",
            e.m, e.c_abs, e.residual_lower, e.residual_upper, e.second_order_error
        );
    }
    println!("slope lower {:?}  upper {:?}", report.slope_lower, report.slope_upper);
    println!("fitted constant {:?}", report.fitted_constant);
    println!("second order closer in {:.0}% of bands", 100.0 * report.second_order_wins);
    Ok(())
}
