//! Neumann habitats: constants are invariant and the threshold does not
//! depend on the habitat.
//!
//! `cargo run --release --example neumann`

use seasonal_dispersal::config::Preset;
use seasonal_dispersal::periodic::seasonal_ode_value;
use seasonal_dispersal::prelude::*;

fn main() -> Result<()> {
    let p = Preset::P1.params();
    let k = Preset::P1.kernel();
    for l in [0.2, 4.0, 40.0] {
        let op = assemble(&k, &Grid::new(-l, l, 32)?, BoundaryCondition::NeumannNonlocal, p.d)?;
        println!("length {:>5}: lambda1 = {:+.6}", 2.0 * l, threshold(&p, &op)?.lambda1);
    }
    let grid = Grid::new(-4.0, 4.0, 32)?;
    let op = assemble(&k, &grid, BoundaryCondition::NeumannNonlocal, p.d)?;
    let tr = evolve(&StateVector::constant(32, 0.1, 0.0), &p, &op, &StepControl::for_params(&p), 10.0)?;
    let worst = tr
        .states
        .iter()
        .flat_map(|s| s.values.iter().map(move |v| (v - seasonal_ode_value(&p, 0.1, s.time)).abs()))
        .fold(0.0, f64::max);
    println!("constant data vs scalar ODE over 10 periods: max deviation {worst:.3e}");
    Ok(())
}
