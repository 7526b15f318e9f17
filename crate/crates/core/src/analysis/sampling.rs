//! Random states and directions for the numerical checks.
//!
//! Stretch tensors are drawn in logarithmic coordinates: eigenvalues
//! `exp(l_i)` with random principal axes, then composed with a random
//! rotation. Rotations are Haar-distributed on `SO(n)`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::tensor::{SymTensor, Tensor};

/// Independent, reproducible generator for item `index` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_unit<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.map(|x| x / n);
        }
    }
}

/// Haar-distributed proper rotation (Gram-Schmidt on a Gaussian matrix).
pub fn random_rotation<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Tensor<N> {
    loop {
        let mut cols: [[f64; N]; N] = std::array::from_fn(|_| std::array::from_fn(|_| StandardNormal.sample(rng)));
        let mut ok = true;
        for j in 0..N {
            // two passes keep the columns orthogonal to machine precision
            for _ in 0..2 {
                for k in 0..j {
                    let d: f64 = (0..N).map(|i| cols[j][i] * cols[k][i]).sum();
                    for i in 0..N {
                        cols[j][i] -= d * cols[k][i];
                    }
                }
            }
            let n = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-8 {
                ok = false;
                break;
            }
            for x in cols[j].iter_mut() {
                *x /= n;
            }
        }
        if !ok {
            continue;
        }
        let mut q = Tensor::from_columns(&cols);
        if q.det() < 0.0 {
            for x in cols[0].iter_mut() {
                *x = -*x;
            }
            q = Tensor::from_columns(&cols);
        }
        return q;
    }
}

/// Symmetric tensor with prescribed eigenvalues and random principal axes.
pub fn random_spectral<const N: usize, R: Rng + ?Sized>(values: &[f64; N], rng: &mut R) -> SymTensor<N> {
    SymTensor::from_spectral(values, &random_rotation(rng))
}

/// Log-stretch exponents with `|dev l|^2 = dev_sq` in a uniformly random
/// deviatoric direction and `tr l = trace`.
pub fn deviatoric_exponents<const N: usize, R: Rng + ?Sized>(dev_sq: f64, trace: f64, rng: &mut R) -> [f64; N] {
    let r = dev_sq.max(0.0).sqrt();
    let mean = trace / N as f64;
    let mut l = [mean; N];
    if N == 2 {
        let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let a = s * r / 2f64.sqrt();
        l[0] += a;
        l[1] -= a;
    } else {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let (c, s) = (r * theta.cos(), r * theta.sin());
        let ea = [1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0];
        let eb = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()];
        for i in 0..N {
            l[i] += c * ea[i] + s * eb[i];
        }
    }
    l
}

/// Where stretch states are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// Each principal log stretch uniform in `[-bound, bound]`.
    StretchExponents { bound: f64 },
    /// `|dev log U|^2` uniform in `[dev_sq_min, dev_sq_max]`, `tr log U` uniform in `[-vol, vol]`.
    DevBand { dev_sq_min: f64, dev_sq_max: f64, vol: f64 },
}

impl Region {
    pub fn log_stretches<const N: usize, R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; N] {
        match *self {
            Region::StretchExponents { bound } => {
                std::array::from_fn(|_| if bound > 0.0 { rng.random_range(-bound..=bound) } else { 0.0 })
            }
            Region::DevBand { dev_sq_min, dev_sq_max, vol } => {
                let dev_sq = if dev_sq_max > dev_sq_min { rng.random_range(dev_sq_min..=dev_sq_max) } else { dev_sq_min };
                let trace = if vol > 0.0 { rng.random_range(-vol..=vol) } else { 0.0 };
                deviatoric_exponents(dev_sq, trace, rng)
            }
        }
    }

    /// `F = R U` with `U = Q diag(exp l) Q^T`.
    pub fn sample<const N: usize, R: Rng + ?Sized>(&self, rng: &mut R) -> Tensor<N> {
        let l: [f64; N] = self.log_stretches(rng);
        let u = random_spectral(&l.map(f64::exp), rng);
        random_rotation(rng) * u.to_tensor()
    }

    pub fn validate(&self) -> Result<(), String> {
        match *self {
            Region::StretchExponents { bound } if !(bound >= 0.0 && bound.is_finite()) => {
                Err("bound must be finite and >= 0".into())
            }
            Region::DevBand { dev_sq_min, dev_sq_max, vol }
                if !(dev_sq_min >= 0.0 && dev_sq_max >= dev_sq_min && dev_sq_max.is_finite() && vol >= 0.0 && vol.is_finite()) =>
            {
                Err("need 0 <= dev_sq_min <= dev_sq_max and vol >= 0".into())
            }
            _ => Ok(()),
        }
    }
}

/// Random invertible tensor with singular values spread so that its
/// condition number is at most `max_cond`.
pub fn random_conditioned<const N: usize, R: Rng + ?Sized>(max_cond: f64, rng: &mut R) -> Tensor<N> {
    let half = 0.5 * max_cond.max(1.0).ln();
    let s: [f64; N] = std::array::from_fn(|_| if half > 0.0 { rng.random_range(-half..=half).exp() } else { 1.0 });
    random_rotation(rng) * Tensor::from_diagonal(s) * random_rotation(rng)
}

pub fn random_symmetric<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> SymTensor<N> {
    let t: Tensor<N> = random_general(rng);
    t.sym()
}

pub fn random_general<const N: usize, R: Rng + ?Sized>(rng: &mut R) -> Tensor<N> {
    Tensor::from_rows(std::array::from_fn(|_| std::array::from_fn(|_| StandardNormal.sample(rng))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::LogStrainInvariants;
    use crate::tensor::Tensor3;

    #[test]
    fn rotations_are_proper_and_orthogonal() {
        let mut rng = stream_rng(7, 0);
        for _ in 0..50 {
            let q: Tensor3 = random_rotation(&mut rng);
            assert!((q.transpose() * q - Tensor3::identity()).norm() < 1e-14);
            assert!((q.det() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dev_band_hits_requested_norm() {
        let mut rng = stream_rng(1, 3);
        let region = Region::DevBand { dev_sq_min: 10.0, dev_sq_max: 10.0, vol: 0.3 };
        for _ in 0..20 {
            let f: Tensor3 = region.sample(&mut rng);
            let inv = LogStrainInvariants::of(&f).unwrap();
            assert!((inv.dev_sq - 10.0).abs() < 1e-10);
            assert!(inv.trace.abs() <= 0.3 + 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: [f64; 3] = random_unit(&mut stream_rng(5, 1));
        let b: [f64; 3] = random_unit(&mut stream_rng(5, 1));
        let c: [f64; 3] = random_unit(&mut stream_rng(5, 2));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn conditioned_tensor_respects_bound() {
        let mut rng = stream_rng(2, 0);
        for _ in 0..20 {
            let f: Tensor3 = random_conditioned(1e3, &mut rng);
            let l = crate::constitutive::log_stretches(&f).unwrap();
            assert!(l[2] - l[0] <= 1e3f64.ln() + 1e-9);
        }
    }
}
