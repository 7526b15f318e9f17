//! The transformation bound `|Fe^T S Fe^{-T}|^2 >= |S|^2 / 2` and the
//! rank-one identity under `F -> F Fp^{-1}`.
//!
//! Run with `cargo run --release --example lemma_bounds`.

use hencky::analysis::estimates::{lemma2_search, unloading_ellipticity, MatrixClass};
use hencky::constitutive::{energy_eh, MaterialParams};
use hencky::tensor::mat_exp;
use hencky::{SymTensor, Tensor3};

fn main() {
    for class in [MatrixClass::Symmetric, MatrixClass::Skew, MatrixClass::General] {
        let r = lemma2_search(class, 100_000, 1e3, 5);
        println!("{class:?}: min ratio over {} samples with cond(Fe) <= 1e3: {:.6}", r.samples, r.min_ratio);
    }

    let p = MaterialParams::default();
    let fp = mat_exp(&SymTensor::from_diagonal([0.2, -0.05, -0.15]).to_tensor());
    let f = Tensor3::from_rows([[1.1, 0.2, 0.0], [0.0, 0.9, 0.1], [0.05, 0.0, 1.05]]);
    let (lhs, rhs) = unloading_ellipticity(|x: &Tensor3| energy_eh(x, &p), &f, &fp, &[0.6, 0.8, 0.0], &[0.0, 0.6, 0.8], 1e-3).unwrap();
    println!("D2 W(F Fp^-1).(xi⊗eta)^2 = {lhs:.9}, D2 W(Fe).(xi⊗Fp^-T eta)^2 = {rhs:.9}");
}
