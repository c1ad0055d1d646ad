//! Critical habitat length for P2 and how it moves with the dispersal rate.
//!
//! `cargo run --release --example critical_length -- [tol]`

use seasonal_dispersal::config::Preset;
use seasonal_dispersal::prelude::*;
use seasonal_dispersal::spectral::threshold_at_length;

fn main() -> Result<()> {
    let tol: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1e-6);
    let base = Preset::P2.params();
    let k = Preset::P2.kernel();
    println!("{:>6} {:>16} {:>14} {:>14} {:>6}", "d", "ell*", "lambda(lower)", "lambda(upper)", "evals");
    for d in [0.7, 0.8, 1.0, 1.5, 3.0] {
        let p = SeasonParams::new(base.delta, base.a, base.b, d, base.rho, base.omega)?;
        match critical_length(&p, &k, tol)? {
            CriticalLengthOutcome::Critical(c) => println!(
                "{d:>6} {:>16.10} {:>+14.3e} {:>+14.3e} {:>6}",
                c.ell_star, c.lambda_lower, c.lambda_upper, c.evaluations
            ),
            other => println!("{d:>6} {other:?}"),
        }
    }
    let ell = [0.4, 8.0];
    for l in ell {
        let r = threshold_at_length(&base, &k, l)?;
        println!("P2, length {l}: lambda1 = {:+.6e} ({})", r.lambda1, if r.persists() { "persists" } else { "dies out" });
    }
    Ok(())
}
