//! With `q = 0` every band edge is `N²π²/a²` and every gap closes.

use std::f64::consts::PI;

use hillgap::{band_spectrum, BoundaryCondition, Potential};

fn main() -> hillgap::Result<()> {
    let q = Potential::zero(PI);
    for bc in [BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic] {
        let spec = band_spectrum(&q, bc, 5, None)?;
        println!("{} (K = {})", bc.as_str(), spec.truncation);
        for p in &spec.pairs {
            println!(
                "  m = {:2}  N = {:2}  edges {:>10.6} {:>10.6}  gap {:.1e}  degenerate {}",
                p.band.m, p.band.n, p.lower, p.upper, p.gap, p.degenerate
            );
        }
    }
    Ok(())
}
