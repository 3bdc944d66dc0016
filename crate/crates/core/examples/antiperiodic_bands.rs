//! The Floquet discriminant across the first bands: edges sit where
//! `D(λ) = 2` (periodic) or `D(λ) = −2` (antiperiodic).

use hillgap::{band_spectrum, floquet_discriminant, BoundaryCondition, Potential};

fn main() -> hillgap::Result<()> {
    let q = Potential::mathieu(1.0, std::f64::consts::PI);
    for lambda in (0..=40).map(|i| -1.0 + 0.25 * i as f64) {
        let d = floquet_discriminant(&q, lambda, 1e-10)?.d;
        let state = if d.abs() <= 2.0 { "stable" } else { "unstable" };
        println!("λ = {lambda:6.2}  D = {d:+.8}  {state}");
    }
    let anti = band_spectrum(&q, BoundaryCondition::Antiperiodic, 2, None)?;
    for p in &anti.pairs {
        let lo = floquet_discriminant(&q, p.lower, 1e-12)?.d;
        let hi = floquet_discriminant(&q, p.upper, 1e-12)?.d;
        println!("antiperiodic N = {}: D at edges {lo:+.10} {hi:+.10}", p.band.n);
    }
    Ok(())
}
