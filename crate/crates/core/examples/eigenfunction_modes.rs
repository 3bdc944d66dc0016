//! Splits band eigenvectors into the two resonant exponentials and a
//! remainder, showing the remainder shrink as the band index grows.

use hillgap::{band_spectrum, mode_decomposition, BoundaryCondition, Potential};

fn main() -> hillgap::Result<()> {
    let q = Potential::harmonic_decay(1.0, 32, 1.0);
    let spec = band_spectrum(&q, BoundaryCondition::Periodic, 16, None)?;
    for (p, vs) in spec.pairs.iter().zip(&spec.vectors).skip(1) {
        for (edge, v) in ["lower", "upper"].iter().zip(vs) {
            let d = mode_decomposition(v, &p.band)?;
            println!(
                "m = {:2} {edge}  |u| {:.6}  |v| {:.6}  |h| {:.3e}  sup h <= {:.3e}",
                p.band.m,
                d.u.norm(),
                d.v.norm(),
                d.h_norm,
                d.h_sup
            );
        }
    }
    Ok(())
}
