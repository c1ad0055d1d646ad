//! Spatially constant seasonal orbit: closed form against forward iteration.
//!
//! `cargo run --example ode_reference`

use seasonal_dispersal::config::Preset;
use seasonal_dispersal::periodic::{ode_periodic_solution, seasonal_ode_period};

fn main() {
    for preset in [Preset::P1, Preset::P2, Preset::P3] {
        let p = preset.params();
        match ode_periodic_solution(&p).periodic() {
            Some(orbit) => {
                let mut z = 3.0;
                let mut k = 0;
                while (z - orbit.z0).abs() > 1e-12 && k < 10_000 {
                    z = seasonal_ode_period(&p, z);
                    k += 1;
                }
                println!("{}: z*(0) = {:.12}, iteration from 3 agrees after {k} periods", preset.name(), orbit.z0);
                let samples: Vec<String> = (0..=4).map(|i| format!("{:.4}", orbit.value(i as f64 * p.omega / 4.0))).collect();
                println!("    z*(t) at quarter periods: {}", samples.join(" "));
            }
            None => {
                let mut z = 1.0;
                for _ in 0..1000 {
                    z = seasonal_ode_period(&p, z);
                }
                println!("{}: no positive orbit; z after 1000 periods from 1 = {z:.3e}", preset.name());
            }
        }
    }
}
