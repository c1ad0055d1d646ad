//! Positive periodic solution from the upper/lower sandwich, with the
//! per-iterate gap and log-ratio.
//!
//! `cargo run --release --example periodic -- [l] [n]`

use seasonal_dispersal::config::Preset;
use seasonal_dispersal::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let l: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.2);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(32);
    let p = Preset::P1.params();
    let grid = Grid::new(-l, l, n)?;
    let op = assemble(&Preset::P1.kernel(), &grid, BoundaryCondition::DirichletNonlocal, p.d)?;
    let e = principal_eigenpair(&op, p.a)?;
    match find_periodic_solution(&p, &op, &e, &StepControl::for_params(&p))? {
        PeriodicOutcome::Periodic { solution, trace } => {
            for (i, r) in trace.records.iter().enumerate().step_by(10) {
                println!("iterate {i:>4}: gap {:.3e}  log-ratio {:.3e}", r.gap, r.log_ratio);
            }
            println!("monotone sandwich: {}", trace.is_monotone(1e-12));
            println!("iterates {}, residual {:.3e}", trace.records.len(), solution.residual);
            let u = &solution.initial().values;
            println!("u*(0): edge {:.6}, centre {:.6}, sup over the period {:.6}", u[0], u[n / 2], solution.sup_norm());
        }
        other => println!("{other:?}"),
    }
    Ok(())
}
