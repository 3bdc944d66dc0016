//! Mathieu characteristic values from both solvers, for `q = 2γ cos 2x`.

use std::f64::consts::PI;

use hillgap::spectrum::refine_spectrum;
use hillgap::{band_spectrum, BoundaryCondition, Potential};

fn main() -> hillgap::Result<()> {
    let gamma = 1.0;
    let q = Potential::mathieu(gamma, PI);
    for bc in [BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic] {
        let spec = band_spectrum(&q, bc, 4, None)?;
        let (ground, shot) = refine_spectrum(&q, &spec, 1e-10)?;
        println!("{}", bc.as_str());
        if let (Some(g), Some(s)) = (spec.ground_state, ground) {
            println!("  ground   galerkin {g:.12}  shooting {s:.12}");
        }
        for (g, s) in spec.pairs.iter().zip(&shot) {
            println!(
                "  N = {:2}  galerkin [{:.12}, {:.12}]  shooting [{:.12}, {:.12}]",
                g.band.n, g.lower, g.upper, s.lower, s.upper
            );
        }
    }
    // small-coupling series for the edges near 4
    let b2 = 4.0 - gamma.powi(2) / 12.0 + 5.0 * gamma.powi(4) / 13824.0;
    let a2 = 4.0 + 5.0 * gamma.powi(2) / 12.0 - 763.0 * gamma.powi(4) / 13824.0;
    println!("series near 4: b2 ≈ {b2:.6}  a2 ≈ {a2:.6}");
    Ok(())
}
