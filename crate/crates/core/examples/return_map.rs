//! One elastic predictor / plastic corrector step from the virgin state.
//!
//! Run with `cargo run --example return_map`.

use hencky::plasticity::{return_map, PlasticState};
use hencky::{MaterialParams, Tensor3, ToleranceSet};

fn main() {
    let p = MaterialParams::default();
    let tol = ToleranceSet::default();
    for gamma in [0.001, 0.01, 0.1] {
        let f = Tensor3::from_rows([[1.0, gamma, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let r = return_map(&f, &PlasticState::default(), &p, &tol).unwrap();
        println!("shear {gamma}:");
        println!("  f_trial = {:.6e}, f_final = {:.3e}, dgamma = {:.6e}, iterations = {}", r.f_trial, r.f_final, r.delta_gamma, r.iterations);
        println!("  det Fp - 1 = {:.3e}, dissipation = {:.6e}", r.state.fp.det() - 1.0, r.dissipation);
        println!("  tau12 = {:.9}", r.stresses.tau[(0, 1)]);
    }
}
