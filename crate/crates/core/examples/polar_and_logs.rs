//! Polar decomposition, symmetric logarithm/exponential and the matrix exponential.
//!
//! Run with `cargo run --example polar_and_logs`.

use hencky::tensor::{mat_exp, polar_right, sym_exp, sym_log};
use hencky::{SymTensor, Tensor3};

fn main() {
    let f = Tensor3::from_rows([[1.2, 0.4, 0.0], [-0.1, 0.9, 0.3], [0.0, 0.2, 1.1]]);
    let (r, u) = polar_right(&f).expect("det F > 0");
    println!("F = R U");
    println!("  |R^T R - 1|  = {:.3e}", (r.transpose() * r - Tensor3::identity()).norm());
    println!("  |R U - F|    = {:.3e}", (r * *u.as_tensor() - f).norm());

    let eig = u.as_sym().eigen();
    println!("  principal stretches {:?}", eig.values);

    let log_u = sym_log(&u);
    println!("Hencky strain log U: trace {:.6} = log det F {:.6}", log_u.trace(), f.det().ln());
    println!("  |exp(log U) - U| = {:.3e}", (sym_exp(&log_u).as_tensor().clone() - *u.as_tensor()).norm());

    // traceless generators give unimodular exponentials
    let n = SymTensor::from_diagonal([0.3, -0.1, -0.2]).to_tensor() + Tensor3::from_rows([[0.0, 0.2, 0.0], [0.2, 0.0, 0.0], [0.0, 0.0, 0.0]]);
    println!("det exp(N) for tr N = 0: {:.15}", mat_exp(&n).det());
}
