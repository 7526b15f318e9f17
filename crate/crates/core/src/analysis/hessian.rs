//! Closed-form rank-one second derivatives of the exponentiated Hencky energy.
//!
//! For an isotropic energy written in principal log stretches `l_i`, with
//! `F = P diag(lambda) Q^T` and `H = P^T (xi ⊗ eta) Q`,
//!
//! ```text
//! D^2 W(F).(xi⊗eta, xi⊗eta) = sum_ij W_ij H_ii H_jj
//!     + sum_{i != j} [ A_ij H_ij^2 + B_ij H_ij H_ji ]
//! W_ij = (g_ij - delta_ij g_i) / (lambda_i lambda_j)
//! A_ij = (g_i - g_j) / (lambda_i^2 - lambda_j^2)
//! B_ij = (lambda_j / lambda_i) A_ij - g_j / (lambda_i lambda_j)
//! ```
//!
//! where `g_i = dW/dl_i` are the principal Kirchhoff stresses. For the Hencky
//! family `g_i - g_j = 2 mu e^{k |dev l|^2} (l_i - l_j)`, so `A_ij` has a stable
//! closed form at coalescing stretches. No finite differences are involved,
//! which keeps the value accurate where `W` is large and `F` ill-conditioned.

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::constitutive::MaterialParams;
use crate::tensor::{polar_right, Tensor};

/// Which terms of the exponentiated Hencky energy are differentiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyPart {
    #[default]
    Full,
    Distortional,
    Volumetric,
}

/// `(x - y) / (e^{2x} - e^{2y})`, finite as `x -> y`.
fn divided_inverse_square(x: f64, y: f64) -> f64 {
    let d = x - y;
    let ratio = if d.abs() < 1e-4 { 1.0 - d * d / 6.0 } else { d / d.sinh() };
    0.5 * (-(x + y)).exp() * ratio
}

/// Exact `d^2/dt^2 W_eH(F + t xi ⊗ eta)` at `t = 0`.
pub fn rank_one_d2_exact<const N: usize>(
    f: &Tensor<N>,
    xi: &[f64; N],
    eta: &[f64; N],
    p: &MaterialParams,
    part: EnergyPart,
) -> Result<f64, AnalysisError> {
    let (r, u) = polar_right(f)?;
    let eig = u.as_sym().eigen();
    let lam = eig.values;
    let l = lam.map(f64::ln);
    let q = eig.vectors;
    let pm = r * q;

    let n = N as f64;
    let tr: f64 = l.iter().sum();
    let dev = l.map(|x| x - tr / n);
    let dev_sq: f64 = dev.iter().map(|x| x * x).sum();

    let (iso, vol) = match part {
        EnergyPart::Full => (true, true),
        EnergyPart::Distortional => (true, false),
        EnergyPart::Volumetric => (false, true),
    };
    let c_iso = if iso { 2.0 * p.mu * (p.k * dev_sq).exp() } else { 0.0 };
    let e_vol = if vol { p.kappa * (p.k_hat * tr * tr).exp() } else { 0.0 };

    let g: [f64; N] = std::array::from_fn(|i| c_iso * dev[i] + e_vol * tr);
    let gg: [[f64; N]; N] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            c_iso * (delta - 1.0 / n + 2.0 * p.k * dev[i] * dev[j]) + e_vol * (1.0 + 2.0 * p.k_hat * tr * tr)
        })
    });

    let a = pm.transpose().mul_vec(xi);
    let b = q.transpose().mul_vec(eta);
    let h = |i: usize, j: usize| a[i] * b[j];

    let mut d2 = 0.0;
    for i in 0..N {
        for j in 0..N {
            let delta = if i == j { g[i] } else { 0.0 };
            d2 += (gg[i][j] - delta) / (lam[i] * lam[j]) * h(i, i) * h(j, j);
            if i != j {
                let a_ij = c_iso * divided_inverse_square(l[i], l[j]);
                let b_ij = lam[j] / lam[i] * a_ij - g[j] / (lam[i] * lam[j]);
                d2 += a_ij * h(i, j) * h(i, j) + b_ij * h(i, j) * h(j, i);
            }
        }
    }
    Ok(d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::rank_one::rank_one_d2;
    use crate::constitutive::{energy_eh, energy_eh_iso, energy_eh_vol};
    use crate::tensor::{Tensor2, Tensor3};

    fn fd_check<const N: usize>(f: Tensor<N>, xi: [f64; N], eta: [f64; N], p: &MaterialParams) {
        let cases: [(EnergyPart, &dyn Fn(&Tensor<N>) -> f64); 3] = [
            (EnergyPart::Full, &|g| energy_eh(g, p)),
            (EnergyPart::Distortional, &|g| energy_eh_iso(g, p)),
            (EnergyPart::Volumetric, &|g| energy_eh_vol(g, p)),
        ];
        for (part, w) in cases {
            let exact = rank_one_d2_exact(&f, &xi, &eta, p, part).unwrap();
            let fd = rank_one_d2(w, &f, &xi, &eta, 1e-4).unwrap();
            assert!((exact - fd).abs() <= 1e-5 * exact.abs().max(1.0), "{part:?}: exact {exact} vs fd {fd}");
        }
    }

    #[test]
    fn matches_finite_differences_3d() {
        let p = MaterialParams::default();
        let f = Tensor3::from_rows([[1.2, 0.3, -0.1], [0.05, 0.8, 0.2], [0.1, 0.0, 1.1]]);
        let s = 1.0 / 3f64.sqrt();
        fd_check(f, [0.6, 0.8, 0.0], [s, s, s], &p);
        fd_check(f, [0.0, 0.0, 1.0], [1.0, 0.0, 0.0], &p);
    }

    #[test]
    fn matches_finite_differences_2d() {
        let p = MaterialParams { n: 2, ..MaterialParams::default() };
        let f = Tensor2::from_rows([[1.4, 0.3], [-0.2, 0.7]]);
        fd_check(f, [0.6, 0.8], [0.0, 1.0], &p);
    }

    #[test]
    fn coalescing_stretches_are_finite_and_continuous() {
        let p = MaterialParams::default();
        let xi = [0.6, 0.0, 0.8];
        let eta = [0.0, 1.0, 0.0];
        let at = |eps: f64| rank_one_d2_exact(&Tensor3::from_diagonal([1.1, 1.1 + eps, 0.9]), &xi, &eta, &p, EnergyPart::Full).unwrap();
        let (a, b) = (at(0.0), at(1e-7));
        assert!(a.is_finite() && (a - b).abs() <= 1e-5 * a.abs());
        fd_check(Tensor3::identity(), xi, eta, &p);
    }

    #[test]
    fn quadratic_hencky_limit() {
        // k = k_hat = 0: at the identity the energy is the linear-elastic one
        let p = MaterialParams::default().with_exponents(0.0, 0.0);
        let xi = [1.0, 0.0, 0.0];
        let eta = [0.0, 1.0, 0.0];
        let d2 = rank_one_d2_exact(&Tensor3::identity(), &xi, &eta, &p, EnergyPart::Full).unwrap();
        // 2 mu |sym(e1⊗e2)|^2 = mu
        assert!((d2 - p.mu).abs() < 1e-10);
    }
}
