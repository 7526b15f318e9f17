//! Simple shear loading and unloading of a material point; prints the
//! history as CSV (the same table `hencky simulate` writes).
//!
//! Run with `cargo run --example shear_simulation > shear.csv`.

use hencky::driver::emit_history;
use hencky::path::{drive_path, LoadPath};
use hencky::plasticity::PlasticState;
use hencky::{MaterialParams, ToleranceSet};

fn main() {
    let p = MaterialParams::default();
    let path = LoadPath::<3>::simple_shear(0.05, 100).with_unloading();
    let (history, state) = drive_path(&path, PlasticState::default(), &p, &ToleranceSet::default()).unwrap();
    emit_history(&history, std::io::stdout().lock()).unwrap();
    eprintln!(
        "{} steps, gamma_acc = {:.6e}, max |det Fp - 1| = {:.3e}, residual tau12 = {:.6e}",
        history.len(),
        state.gamma_acc,
        history.max_det_fp_drift(),
        history.last().unwrap().stresses.tau[(0, 1)]
    );
}
