//! Where the distortional energy first loses rank-one convexity in 3D, as a
//! function of k.
//!
//! Run with `cargo run --release --example ellipticity_onset`.

use hencky::analysis::hessian::EnergyPart;
use hencky::analysis::rank_one::{negative_onset, CONE_BOUND};
use hencky::constitutive::MaterialParams;

fn main() {
    println!("{:>8}  first |dev log U|^2 band with d2 < 0 (limit 40, band 0.25)", "k");
    for k in [3.0 / 16.0, 0.25, 0.375, 0.5, 1.0] {
        let p = MaterialParams::default().with_exponents(k, 0.125);
        let onset = negative_onset(&p, EnergyPart::Distortional, 0.25, 40.0, 1000, 50, 11);
        let text = onset.map_or("none".to_string(), |v| format!("{v:.2}{}", if v < CONE_BOUND { " (inside the 27 cone)" } else { "" }));
        println!("{k:>8.4}  {text}");
    }
}
