//! Exact Fourier-sum identities checked against quadrature of the
//! corresponding profiles, for a random trigonometric polynomial.

use hillgap::identities::check_all;
use hillgap::Potential;
use num_complex::Complex64;

fn main() -> hillgap::Result<()> {
    let terms = [(1, Complex64::new(0.5, 0.25)), (2, Complex64::new(-0.2, 0.1)), (5, Complex64::new(0.3, -0.4))];
    let mut all = Vec::new();
    for &(k, c) in &terms {
        all.push((k, c));
        all.push((-k, c.conj()));
    }
    let q = Potential::trig(1.0, &all)?;
    let table = q.fourier_table(q.degree().unwrap_or(1))?;
    for m in 1..=3 {
        for r in check_all(&table, m)? {
            println!(
                "m = {m}  {:<6}  sum {:+.6e}{:+.6e}i  integral {:+.6e}{:+.6e}i  |diff| {:.1e}  {}",
                r.name.as_str(),
                r.sum_value.re,
                r.sum_value.im,
                r.integral_value.re,
                r.integral_value.im,
                r.abs_diff,
                if r.passes(1e-10) { "ok" } else { "FAIL" }
            );
        }
    }
    Ok(())
}
