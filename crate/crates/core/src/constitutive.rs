//! Hyperelastic energies on the volumetric-isochoric split and their stresses.
//!
//! The main model is the exponentiated Hencky energy
//!
//! ```text
//! W_eH(F) = mu/k * exp(k |dev_n log U|^2) + kappa/(2 k_hat) * exp(k_hat [tr log U]^2)   (det F > 0)
//!         = +inf                                                                      (det F <= 0)
//! ```
//!
//! with the quadratic Hencky energy and Saint-Venant-Kirchhoff energy available
//! for comparison. Energies take values in the extended reals: `f64::INFINITY`
//! marks states outside `GL+(n)`. Stress operations instead reject such states
//! with [`TensorError::NonInvertible`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::{polar_right, PosDefSymTensor, SymTensor, Tensor, TensorError};

/// Below this value `k` (or `k_hat`) is treated as zero and the exponential
/// term is replaced by its quadratic limit.
pub const EXPONENT_LIMIT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid material parameter `{field}`: {constraint}")]
pub struct ParamError {
    pub field: &'static str,
    pub constraint: String,
}

/// Material constants. Stress-like entries share one consistent unit.
///
/// In planar mode (`n = 2`) `kappa` is the plane-strain bulk modulus, related
/// to the three-dimensional Lamé constant by `kappa_2d - mu = lambda_3d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialParams {
    pub mu: f64,
    pub kappa: f64,
    pub k: f64,
    pub k_hat: f64,
    pub sigma_y: f64,
    pub n: usize,
}

impl Default for MaterialParams {
    fn default() -> Self {
        MaterialParams { mu: 80.0, kappa: 170.0, k: 0.25, k_hat: 0.125, sigma_y: 0.3, n: 3 }
    }
}

impl MaterialParams {
    pub fn new(mu: f64, kappa: f64, k: f64, k_hat: f64, sigma_y: f64, n: usize) -> Result<Self, ParamError> {
        let p = MaterialParams { mu, kappa, k, k_hat, sigma_y, n };
        p.validate().map_err(|mut errs| errs.swap_remove(0))?;
        Ok(p)
    }

    /// Planar parameters identified from three-dimensional Lamé constants.
    pub fn plane_strain(mu: f64, lambda_3d: f64, k: f64, k_hat: f64, sigma_y: f64) -> Result<Self, ParamError> {
        Self::new(mu, mu + lambda_3d, k, k_hat, sigma_y, 2)
    }

    /// All constraint violations, in field order.
    pub fn validate(&self) -> Result<(), Vec<ParamError>> {
        let mut errs = Vec::new();
        let mut check = |field: &'static str, ok: bool, constraint: &str| {
            if !ok {
                errs.push(ParamError { field, constraint: constraint.to_string() });
            }
        };
        check("mu", self.mu > 0.0 && self.mu.is_finite(), "must be finite and > 0");
        check("kappa", self.kappa > 0.0 && self.kappa.is_finite(), "must be finite and > 0");
        check("k", self.k >= 0.0 && self.k.is_finite(), "must be finite and >= 0");
        check("k_hat", self.k_hat >= 0.0 && self.k_hat.is_finite(), "must be finite and >= 0");
        check("sigma_y", self.sigma_y > 0.0 && self.sigma_y.is_finite(), "must be finite and > 0");
        check("n", self.n == 2 || self.n == 3, "must be 2 or 3");
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// First Lamé constant: `kappa - 2 mu / 3` in 3D, `kappa - mu` in planar mode.
    pub fn lambda(&self) -> f64 {
        if self.n == 2 {
            self.kappa - self.mu
        } else {
            self.kappa - 2.0 * self.mu / 3.0
        }
    }

    pub fn with_exponents(mut self, k: f64, k_hat: f64) -> Self {
        self.k = k;
        self.k_hat = k_hat;
        self
    }

    pub fn with_sigma_y(mut self, sigma_y: f64) -> Self {
        self.sigma_y = sigma_y;
        self
    }

    /// `W_eH(identity)`, the additive constant of the exponentiated energy.
    pub fn reference_energy(&self) -> f64 {
        let iso = if self.k < EXPONENT_LIMIT { 0.0 } else { self.mu / self.k };
        let vol = if self.k_hat < EXPONENT_LIMIT { 0.0 } else { self.kappa / (2.0 * self.k_hat) };
        iso + vol
    }
}

/// Logarithmic strain invariants `|dev log U|^2` and `tr log U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogStrainInvariants {
    pub dev_sq: f64,
    pub trace: f64,
}

impl LogStrainInvariants {
    pub fn from_log_stretches<const N: usize>(logs: &[f64; N]) -> Self {
        let trace: f64 = logs.iter().sum();
        let mean = trace / N as f64;
        let dev_sq = logs.iter().map(|l| (l - mean) * (l - mean)).sum();
        LogStrainInvariants { dev_sq, trace }
    }

    /// `None` outside `GL+(n)`.
    pub fn of<const N: usize>(f: &Tensor<N>) -> Option<Self> {
        log_stretches(f).map(|l| Self::from_log_stretches(&l))
    }
}

/// Logarithms of the principal stretches (eigenvalues of `U`), ascending.
pub fn log_stretches<const N: usize>(f: &Tensor<N>) -> Option<[f64; N]> {
    let (_, u) = polar_right(f).ok()?;
    let values = u.as_sym().eigen().values;
    if values.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    Some(values.map(f64::ln))
}

/// `c/k * expm1(k x)`, continuous in `k` down to `c x` at `k = 0`.
fn exp_excess(c: f64, k: f64, x: f64) -> f64 {
    if k < EXPONENT_LIMIT {
        c * x
    } else {
        c / k * (k * x).exp_m1()
    }
}

/// Distortional part `mu/k exp(k |dev_n log U|^2)`.
pub fn energy_eh_iso<const N: usize>(f: &Tensor<N>, p: &MaterialParams) -> f64 {
    match LogStrainInvariants::of(f) {
        Some(inv) => {
            let c = if p.k < EXPONENT_LIMIT { 0.0 } else { p.mu / p.k };
            c + exp_excess(p.mu, p.k, inv.dev_sq)
        }
        None => f64::INFINITY,
    }
}

/// Volumetric part `kappa/(2 k_hat) exp(k_hat [log det F]^2)`.
pub fn energy_eh_vol<const N: usize>(f: &Tensor<N>, p: &MaterialParams) -> f64 {
    let j = f.det();
    if !(j > 0.0) || !f.is_finite() {
        return f64::INFINITY;
    }
    let c = if p.k_hat < EXPONENT_LIMIT { 0.0 } else { p.kappa / (2.0 * p.k_hat) };
    let t = j.ln();
    c + exp_excess(0.5 * p.kappa, p.k_hat, t * t)
}

/// Exponentiated Hencky energy; `+inf` when `det F <= 0`.
pub fn energy_eh<const N: usize>(f: &Tensor<N>, p: &MaterialParams) -> f64 {
    match LogStrainInvariants::of(f) {
        Some(inv) => p.reference_energy() + excess_from_invariants(&inv, p),
        None => f64::INFINITY,
    }
}

/// `W_eH(F) - W_eH(identity)`, evaluated without cancellation near the identity.
pub fn energy_eh_excess<const N: usize>(f: &Tensor<N>, p: &MaterialParams) -> f64 {
    match LogStrainInvariants::of(f) {
        Some(inv) => excess_from_invariants(&inv, p),
        None => f64::INFINITY,
    }
}

fn excess_from_invariants(inv: &LogStrainInvariants, p: &MaterialParams) -> f64 {
    exp_excess(p.mu, p.k, inv.dev_sq) + exp_excess(0.5 * p.kappa, p.k_hat, inv.trace * inv.trace)
}

/// Quadratic Hencky energy `mu |dev_n log U|^2 + kappa/2 [tr log U]^2`; `+inf` when `det F <= 0`.
pub fn energy_h<const N: usize>(f: &Tensor<N>, p: &MaterialParams) -> f64 {
    match LogStrainInvariants::of(f) {
        Some(inv) => p.mu * inv.dev_sq + 0.5 * p.kappa * inv.trace * inv.trace,
        None => f64::INFINITY,
    }
}

/// Saint-Venant-Kirchhoff energy `mu/4 |C - 1|^2 + lambda/8 [tr(C - 1)]^2`.
pub fn energy_svk<const N: usize>(f: &Tensor<N>, p: &MaterialParams) -> Result<f64, TensorError> {
    let det = f.det();
    if !(det > 0.0) || !f.is_finite() {
        return Err(TensorError::NonInvertible { det });
    }
    let e = f.transpose() * *f - Tensor::identity();
    let tr = e.trace();
    Ok(0.25 * p.mu * e.norm_sq() + 0.125 * p.lambda() * tr * tr)
}

/// Kinematic quantities of one deformation state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics<const N: usize> {
    pub f: Tensor<N>,
    pub r: Tensor<N>,
    pub u: PosDefSymTensor<N>,
    pub v: PosDefSymTensor<N>,
    pub b: PosDefSymTensor<N>,
    pub c: PosDefSymTensor<N>,
    pub log_u: SymTensor<N>,
    pub log_v: SymTensor<N>,
    pub j: f64,
}

impl<const N: usize> Kinematics<N> {
    pub fn new(f: &Tensor<N>) -> Result<Self, TensorError> {
        let (r, u) = polar_right(f)?;
        let det = f.det();
        let to_posdef = |s: SymTensor<N>| PosDefSymTensor::try_new(s).map_err(|_| TensorError::NonInvertible { det });
        let eig = u.as_sym().eigen();
        let log_u = eig.map(f64::ln);
        // V = R U R^T shares the spectrum of U with rotated eigenvectors
        let rotated = r * eig.vectors;
        let v = to_posdef(SymTensor::from_spectral(&eig.values, &rotated))?;
        let log_v = SymTensor::from_spectral(&eig.values.map(f64::ln), &rotated);
        let b = to_posdef(SymTensor::from_tensor(&(*f * f.transpose())))?;
        let c = to_posdef(SymTensor::from_tensor(&(f.transpose() * *f)))?;
        Ok(Kinematics { f: *f, r, u, v, b, c, log_u, log_v, j: det })
    }
}

/// Kirchhoff stress as a function of the spatial log strain `log V`:
/// `2 mu e^{k|dev log V|^2} dev log V + kappa e^{k_hat (tr log V)^2} tr(log V) 1`.
pub fn kirchhoff_from_log_v<const N: usize>(log_v: &SymTensor<N>, p: &MaterialParams) -> SymTensor<N> {
    let d = log_v.dev();
    let tr = log_v.trace();
    let iso = 2.0 * p.mu * (p.k * d.norm_sq()).exp();
    let vol = p.kappa * (p.k_hat * tr * tr).exp() * tr;
    d * iso + SymTensor::scalar(vol)
}

pub fn kirchhoff_eh<const N: usize>(kin: &Kinematics<N>, p: &MaterialParams) -> SymTensor<N> {
    kirchhoff_from_log_v(&kin.log_v, p)
}

/// Cauchy stress `e^{-tr log V} tau`.
pub fn cauchy_eh<const N: usize>(kin: &Kinematics<N>, p: &MaterialParams) -> SymTensor<N> {
    kirchhoff_eh(kin, p) * (-kin.log_v.trace()).exp()
}

/// Mixed-variant stress `Fe^T tau(Fe) Fe^{-T}`.
pub fn mixed_stress<const N: usize>(fe: &Tensor<N>, p: &MaterialParams) -> Result<Tensor<N>, TensorError> {
    let kin = Kinematics::new(fe)?;
    mixed_from_tau(fe, &kirchhoff_eh(&kin, p))
}

fn mixed_from_tau<const N: usize>(fe: &Tensor<N>, tau: &SymTensor<N>) -> Result<Tensor<N>, TensorError> {
    let fe_t = fe.transpose();
    let fe_t_inv = fe_t.try_inverse().ok_or(TensorError::NonInvertible { det: fe.det() })?;
    Ok(fe_t * *tau.as_tensor() * fe_t_inv)
}

/// Eshelby energy-momentum tensor `Sigma_e - W(Fe) 1`.
pub fn eshelby_stress<const N: usize>(fe: &Tensor<N>, p: &MaterialParams) -> Result<Tensor<N>, TensorError> {
    Ok(mixed_stress(fe, p)? - Tensor::scalar(energy_eh(fe, p)))
}

/// Stresses of one elastic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressSet<const N: usize> {
    pub tau: SymTensor<N>,
    pub sigma: SymTensor<N>,
    pub sigma_e_mixed: Tensor<N>,
    pub eshelby: Tensor<N>,
}

impl<const N: usize> StressSet<N> {
    pub fn evaluate(fe: &Tensor<N>, p: &MaterialParams) -> Result<Self, TensorError> {
        let kin = Kinematics::new(fe)?;
        Ok(Self::from_kinematics(&kin, p)?)
    }

    pub fn from_kinematics(kin: &Kinematics<N>, p: &MaterialParams) -> Result<Self, TensorError> {
        let tau = kirchhoff_eh(kin, p);
        let sigma = tau * (-kin.log_v.trace()).exp();
        let sigma_e_mixed = mixed_from_tau(&kin.f, &tau)?;
        let eshelby = sigma_e_mixed - Tensor::scalar(energy_eh(&kin.f, p));
        Ok(StressSet { tau, sigma, sigma_e_mixed, eshelby })
    }

    pub fn zero_for(p: &MaterialParams) -> Self {
        StressSet {
            tau: SymTensor::zero(),
            sigma: SymTensor::zero(),
            sigma_e_mixed: Tensor::zero(),
            eshelby: Tensor::scalar(-p.reference_energy()),
        }
    }
}
