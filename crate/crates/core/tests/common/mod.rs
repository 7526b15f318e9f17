#![allow(dead_code)]

use hencky::{SymTensor, Tensor3};
use nalgebra::Matrix3;
use proptest::prelude::*;

pub fn to_na(t: &Tensor3) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| t[(i, j)])
}

pub fn from_na(m: &Matrix3<f64>) -> Tensor3 {
    Tensor3::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])))
}

pub fn rel_err(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

pub fn matrix3(range: f64) -> impl Strategy<Value = Tensor3> {
    prop::array::uniform9(-range..range).prop_map(|a| Tensor3::from_rows([[a[0], a[1], a[2]], [a[3], a[4], a[5]], [a[6], a[7], a[8]]]))
}

/// `F = exp(A)` with `|A_ij| < range`: always in GL+.
pub fn gl_plus(range: f64) -> impl Strategy<Value = Tensor3> {
    matrix3(range).prop_map(|a| hencky::tensor::mat_exp(&a))
}

pub fn symmetric(range: f64) -> impl Strategy<Value = SymTensor<3>> {
    matrix3(range).prop_map(|a| a.sym())
}

pub fn unit3() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("non-degenerate", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.map(|x| x / n)
        })
}

pub fn rotation() -> impl Strategy<Value = Tensor3> {
    prop::array::uniform3(-3.0..3.0f64).prop_map(|w| {
        let skew = Tensor3::from_rows([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]]);
        hencky::tensor::mat_exp(&skew)
    })
}
