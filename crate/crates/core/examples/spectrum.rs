//! Principal eigenvalue of the Dirichlet dispersal operator as the habitat grows.
//!
//! `cargo run --release --example spectrum -- [scale] [n]`

use std::time::Instant;

use seasonal_dispersal::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let scale: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(1024);
    let (d, a) = (0.6, 1.2);
    let kernel = KernelSpec::laplace(scale)?;

    println!("{:>10} {:>20} {:>12} {:>8} {:>9}", "length", "sigma1", "residual", "iters", "secs");
    for length in [1e-3, 1.0, 2.0, 4.0, 8.0, 16.0, 200.0] {
        let grid = Grid::centered(length, n)?;
        let op = assemble(&kernel, &grid, BoundaryCondition::DirichletNonlocal, d)?;
        let t = Instant::now();
        let e = principal_eigenpair(&op, a)?;
        println!(
            "{:>10} {:>20.14} {:>12.3e} {:>8} {:>9.3}",
            length,
            e.sigma1,
            e.residual,
            e.iterations,
            t.elapsed().as_secs_f64()
        );
    }
    println!("limits: d - a = {}, -a = {}", d - a, -a);
    Ok(())
}
