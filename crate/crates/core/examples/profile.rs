//! Distance between the periodic solution and the spatially constant orbit
//! as the habitat widens.
//!
//! `cargo run --release --example profile`

use seasonal_dispersal::config::Preset;
use seasonal_dispersal::periodic::{asymptotic_profile_study, ProfileOptions};

fn main() -> seasonal_dispersal::Result<()> {
    let p = Preset::P1.params();
    let k = Preset::P1.kernel();
    let lengths = [200.0, 400.0, 800.0];
    let study = asymptotic_profile_study(&p, &k, &lengths, &ProfileOptions::default())?;
    println!("z*(0) = {:.10}", study.z_star.z0);
    println!("{:>8} {:>6} {:>14} {:>12}", "L", "nodes", "lambda1", "deviation");
    for r in &study.rows {
        println!("{:>8} {:>6} {:>+14.6e} {:>12.4e}", r.length, r.nodes, r.lambda1, r.deviation);
    }
    println!("non-increasing: {}, last below {:.3e}: {}", study.non_increasing, study.bound, study.below_bound);
    Ok(())
}
