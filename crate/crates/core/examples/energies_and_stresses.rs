//! Exponentiated and quadratic Hencky energies and Saint-Venant-Kirchhoff
//! along uniaxial stretch, and the stress measures at one state.
//!
//! Run with `cargo run --example energies_and_stresses`.

use hencky::constitutive::{energy_eh_excess, energy_h, energy_svk, Kinematics, MaterialParams, StressSet};
use hencky::Tensor3;

fn main() {
    let p = MaterialParams::default();
    println!("{:>8} {:>14} {:>14} {:>14}", "stretch", "W_eH - W_eH(1)", "W_H", "W_SVK");
    for lambda in [0.2, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0] {
        let f = Tensor3::from_diagonal([lambda, 1.0, 1.0]);
        println!("{lambda:>8.2} {:>14.6e} {:>14.6e} {:>14.6e}", energy_eh_excess(&f, &p), energy_h(&f, &p), energy_svk(&f, &p).unwrap());
    }
    // SVK does not blow up under full compression
    let flat = Tensor3::from_diagonal([1e-8, 1.0, 1.0]);
    println!("near-flat state: W_eH excess {:.3e}, W_SVK {:.3e}", energy_eh_excess(&flat, &p), energy_svk(&flat, &p).unwrap());

    let f = Tensor3::from_rows([[1.1, 0.3, 0.0], [0.0, 0.95, 0.0], [0.0, 0.0, 1.0]]);
    let kin = Kinematics::new(&f).unwrap();
    let s = StressSet::from_kinematics(&kin, &p).unwrap();
    println!("\nF = {:?}", f.rows());
    println!("tau     = {:?}", s.tau.voigt6());
    println!("sigma   = {:?}", s.sigma.voigt6());
    println!("Sigma_e = {:?}", s.sigma_e_mixed.rows());
    println!("|dev Sigma_e| = {:.12}, |dev tau| = {:.12}", s.sigma_e_mixed.dev().norm(), s.tau.dev().norm());
    println!("dev Eshelby - dev Sigma_e = {:.3e}", (s.eshelby.dev() - s.sigma_e_mixed.dev()).norm());
}
