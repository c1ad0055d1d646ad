//! Integrates the model from cosine initial data and reports the sup-norm
//! and the period-to-period change once per period.
//!
//! `cargo run --release --example simulate -- [P1|P2|P3] [l] [periods]`

use seasonal_dispersal::config::Preset;
use seasonal_dispersal::evolution::Stepper;
use seasonal_dispersal::model::sup_distance;
use seasonal_dispersal::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let preset = args
        .next()
        .and_then(|s| Preset::parse(&s))
        .unwrap_or(Preset::P1);
    let l: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let periods: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(60);

    let p = preset.params();
    let grid = Grid::new(-l, l, 64)?;
    let op = assemble(&preset.kernel(), &grid, BoundaryCondition::DirichletNonlocal, p.d)?;
    let lambda1 = threshold(&p, &op)?.lambda1;
    println!("{} on [-{l}, {l}]: lambda1 = {lambda1:+.6e}", preset.name());

    let mut u: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|x| (std::f64::consts::PI * x / l).cos().max(0.0))
        .collect();
    let mut stepper = Stepper::new(&p, &op, &StepControl::for_params(&p))?;
    println!("{:>6} {:>14} {:>14} {:>12}", "period", "max u", "min u", "|P(u) - u|");
    for k in 1..=periods {
        let prev = u.clone();
        stepper.period_map_in_place(&mut u)?;
        let umin = u.iter().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "{k:>6} {:>14.8} {:>14.8} {:>12.3e}",
            u.iter().cloned().fold(0.0, f64::max),
            umin,
            sup_distance(&u, &prev)
        );
    }
    Ok(())
}
