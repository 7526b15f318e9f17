//! Parses a JSON configuration and runs it through the driver, as the
//! `hencky` binary does.
//!
//! Run with `cargo run --example config_run`.

use hencky::config::parse_config;
use hencky::driver::run;

const CONFIG: &str = r#"{
  "mode": "simulate",
  "material": { "mu": 80.0, "kappa": 170.0, "sigma_y": 0.3 },
  "path": { "kind": "uniaxial", "amplitude": 1.02, "steps": 50, "cycle": true },
  "seed": 7
}"#;

fn main() {
    let config = parse_config(CONFIG).unwrap();
    let out = std::env::temp_dir().join("hencky_config_run.csv");
    let outcome = run(&config, &out).unwrap();
    println!("{outcome:?} -> {}", out.display());

    match parse_config(r#"{"mode": "simulate", "material": {"mu": -1, "n": 5}}"#) {
        Ok(_) => unreachable!(),
        Err(e) => println!("{e}"),
    }
}
