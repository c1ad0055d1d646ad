//! Regime of each preset, with and without a concrete habitat.
//!
//! `cargo run --example classify -- [l]`

use seasonal_dispersal::config::Preset;
use seasonal_dispersal::prelude::*;

fn main() -> Result<()> {
    let l: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4.0);
    let grid = Grid::new(-l, l, 256)?;
    for preset in [Preset::P1, Preset::P2, Preset::P3] {
        let p = preset.params();
        let k = preset.kernel();
        for bc in [BoundaryCondition::DirichletNonlocal, BoundaryCondition::NeumannNonlocal] {
            let c = classify(&p, &k, bc, Some(&grid))?;
            let lambda = c.lambda1.map_or("-".to_string(), |x| format!("{x:+.6e}"));
            let verdict = match c.domain_persists {
                Some(true) => "persists",
                Some(false) => "dies out",
                None => "-",
            };
            println!("{:<3} {:<10} {:<34} lambda1 {lambda:>14}  on [-{l}, {l}]: {verdict}", preset.name(), format!("{bc:?}").trim_end_matches("Nonlocal"), c.regime.to_string());
        }
    }
    Ok(())
}
