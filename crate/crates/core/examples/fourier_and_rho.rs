//! Fourier coefficients of a square wave and the oscillatory sup `ρ(m)`.

use hillgap::perturbation::rho_sequence;
use hillgap::{BoundaryCondition, Potential};

fn main() -> hillgap::Result<()> {
    let q = Potential::square(1.0, 1.0);
    println!("  k  re(c_k)              im(c_k)              quad error");
    for k in -7..=7 {
        let (c, err) = q.fourier_coefficient_with_error(k)?;
        println!("{k:3}  {:+.16e}  {:+.16e}  {err:.1e}", c.re, c.im);
    }
    let ms: Vec<usize> = (1..=10).collect();
    for bc in [BoundaryCondition::Periodic, BoundaryCondition::Antiperiodic] {
        let rho = rho_sequence(&q, bc, &ms, 1024)?;
        println!("{}", bc.as_str());
        for (m, r) in ms.iter().zip(&rho) {
            println!("  m = {m:2}  ρ = {r:.6e}  m·ρ = {:.4}", *m as f64 * r);
        }
    }
    Ok(())
}
