//! Loads a scenario file and runs one analysis, like the CLI does.
//!
//! `cargo run --release --example run_config -- examples/configs/p1_small.cfg simulate`

use seasonal_dispersal::config::load_config;
use seasonal_dispersal::scenario::{run_scenario, Analysis};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "examples/configs/p1_small.cfg".into());
    let analysis: Analysis = args.next().as_deref().unwrap_or("classify").parse().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    let cfg = match load_config(path.as_ref(), &[]) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    print!("{}", run_scenario(&cfg, analysis).to_text());
}
