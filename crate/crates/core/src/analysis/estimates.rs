//! Algebraic estimates and domain checks tied to the elasto-plastic coupling:
//! the transformation bound `|Fe^T S Fe^{-T}|^2 >= |S|^2 / 2`, the invariance
//! of rank-one second derivatives under `F -> F Fp^{-1}`, stress monotonicity
//! in the log strain, and the inclusion of the elastic domain in the
//! Kirchhoff-stress domain and the ellipticity cone.

use rayon::prelude::*;
use serde::Serialize;

use super::rank_one::{cone_membership, rank_one_d2, CONE_BOUND};
use super::sampling::{deviatoric_exponents, random_conditioned, random_general, random_spectral, random_symmetric, stream_rng};
use super::AnalysisError;
use crate::constitutive::{kirchhoff_from_log_v, Kinematics, MaterialParams, StressSet};
use crate::tensor::{PosDefSymTensor, SymTensor, Tensor, Tensor3};

/// `|Fe^T S Fe^{-T}|^2 / |S|^2` for symmetric `S`.
pub fn lemma2_ratio<const N: usize>(fe: &Tensor<N>, s: &SymTensor<N>) -> Result<f64, AnalysisError> {
    lemma2_general_ratio(fe, s.as_tensor())
}

/// Same ratio for arbitrary `S`; no `Fe`-independent lower bound exists here.
pub fn lemma2_general_ratio<const N: usize>(fe: &Tensor<N>, s: &Tensor<N>) -> Result<f64, AnalysisError> {
    let s_norm_sq = s.norm_sq();
    if !(s_norm_sq > 0.0) {
        return Err(AnalysisError::Degenerate("S must be non-zero"));
    }
    let fe_t = fe.transpose();
    let fe_t_inv = fe_t.try_inverse().ok_or(AnalysisError::Degenerate("Fe must be invertible"))?;
    Ok((fe_t * *s * fe_t_inv).norm_sq() / s_norm_sq)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    pub samples: usize,
    pub min_ratio: f64,
    pub max_cond: f64,
    pub seed: u64,
}

/// Which class of `S` a ratio search draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixClass {
    Symmetric,
    Skew,
    General,
}

/// Minimum of the transformation ratio over random `(Fe, S)` with `cond(Fe) <= max_cond`.
pub fn lemma2_search(class: MatrixClass, samples: usize, max_cond: f64, seed: u64) -> RatioReport {
    let min_ratio = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let fe: Tensor3 = random_conditioned(max_cond, &mut rng);
            let s: Tensor3 = match class {
                MatrixClass::Symmetric => random_symmetric(&mut rng).to_tensor(),
                MatrixClass::Skew => random_general::<3, _>(&mut rng).skew(),
                MatrixClass::General => random_general(&mut rng),
            };
            lemma2_general_ratio(&fe, &s).unwrap_or(f64::INFINITY)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    RatioReport { samples, min_ratio, max_cond, seed }
}

/// Cauchy stress as a function of `log B = 2 log V`.
pub fn cauchy_of_log_b<const N: usize>(log_b: &SymTensor<N>, p: &MaterialParams) -> SymTensor<N> {
    let log_v = *log_b * 0.5;
    kirchhoff_from_log_v(&log_v, p) * (-log_v.trace()).exp()
}

/// `<sigma(log B1) - sigma(log B2), log B1 - log B2>`.
pub fn monotonicity_product<const N: usize>(b1: &PosDefSymTensor<N>, b2: &PosDefSymTensor<N>, p: &MaterialParams) -> f64 {
    let (l1, l2) = (b1.log(), b2.log());
    (cauchy_of_log_b(&l1, p) - cauchy_of_log_b(&l2, p)).inner(&(l1 - l2))
}

/// Whether `|dev tau(B)|^2 <= 2/3 sigma_y^2`.
pub fn in_kirchhoff_domain<const N: usize>(b: &PosDefSymTensor<N>, p: &MaterialParams) -> bool {
    let tau = kirchhoff_from_log_v(&(b.log() * 0.5), p);
    tau.dev().norm_sq() <= 2.0 / 3.0 * p.sigma_y * p.sigma_y
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub evaluated: usize,
    pub rejected: usize,
    /// `None` when no pair was evaluated.
    pub min_product: Option<f64>,
}

/// Evaluates the monotonicity product on every admissible pair; pairs with
/// `B1 == B2` or a state outside the Kirchhoff-stress domain are rejected.
pub fn tsts_monotonicity<const N: usize>(
    pairs: &[(PosDefSymTensor<N>, PosDefSymTensor<N>)],
    p: &MaterialParams,
) -> MonotonicityReport {
    let mut report = MonotonicityReport { evaluated: 0, rejected: 0, min_product: None };
    for (b1, b2) in pairs {
        if b1 == b2 || !in_kirchhoff_domain(b1, p) || !in_kirchhoff_domain(b2, p) {
            report.rejected += 1;
            continue;
        }
        let v = monotonicity_product(b1, b2, p);
        report.evaluated += 1;
        report.min_product = Some(report.min_product.map_or(v, |m: f64| m.min(v)));
    }
    report
}

/// `sigma_y` for which the Kirchhoff-stress domain reaches `|dev log V| = extent`.
pub fn sigma_y_for_extent(p: &MaterialParams, extent: f64) -> f64 {
    let dev_tau = 2.0 * p.mu * (p.k * extent * extent).exp() * extent;
    (1.5f64).sqrt() * dev_tau
}

/// Random pairs `B = V^2` with `|dev log V| <= extent`, `|tr log V| <= vol`;
/// only pairs inside the Kirchhoff-stress domain are kept.
pub fn sample_monotonicity_pairs<const N: usize>(
    count: usize,
    extent: f64,
    vol: f64,
    p: &MaterialParams,
    seed: u64,
) -> Vec<(PosDefSymTensor<N>, PosDefSymTensor<N>)> {
    let mut pairs = Vec::with_capacity(count);
    let mut index = 0u64;
    while pairs.len() < count {
        let mut rng = stream_rng(seed, index);
        index += 1;
        let mut draw = || {
            let dev: f64 = rand::Rng::random_range(&mut rng, 0.0..=extent);
            let tr: f64 = rand::Rng::random_range(&mut rng, -vol..=vol);
            let l: [f64; N] = deviatoric_exponents(dev * dev, tr, &mut rng);
            random_spectral(&l.map(|x| (2.0 * x).exp()), &mut rng)
        };
        let (s1, s2) = (draw(), draw());
        if let (Ok(b1), Ok(b2)) = (PosDefSymTensor::try_new(s1), PosDefSymTensor::try_new(s2)) {
            if in_kirchhoff_domain(&b1, p) && in_kirchhoff_domain(&b2, p) && b1 != b2 {
                pairs.push((b1, b2));
            }
        }
        if index > 100 * count as u64 + 1000 {
            break;
        }
    }
    pairs
}

/// Second differences of `F -> W(F Fp^{-1})` at `F` along `xi ⊗ eta` (lhs) and
/// of `W` at `Fe = F Fp^{-1}` along `xi ⊗ Fp^{-T} eta` (rhs), same step.
pub fn unloading_ellipticity<const N: usize>(
    w: impl Fn(&Tensor<N>) -> f64,
    f: &Tensor<N>,
    fp: &Tensor<N>,
    xi: &[f64; N],
    eta: &[f64; N],
    h: f64,
) -> Result<(f64, f64), AnalysisError> {
    let fp_inv = fp.try_inverse().ok_or(AnalysisError::Degenerate("Fp must be invertible"))?;
    let lhs = rank_one_d2(|g| w(&(*g * fp_inv)), f, xi, eta, h)?;
    let eta_hat = fp_inv.transpose().mul_vec(eta);
    let rhs = rank_one_d2(&w, &(*f * fp_inv), xi, &eta_hat, h)?;
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InclusionReport {
    pub samples: usize,
    /// Samples with `|dev Sigma_e|^2 <= sigma_y^2 / 3`.
    pub in_sigma_domain: usize,
    /// In-domain samples with `|dev tau|^2 > 2/3 sigma_y^2`.
    pub tau_violations: usize,
    /// In-domain samples outside the ellipticity cone.
    pub cone_violations: usize,
    /// In-domain samples with `|dev tau|^2 > sigma_y^2 / 3`, i.e. where the
    /// tighter domain obtained from norm equality would be violated.
    pub tau_equal_norm_violations: usize,
    /// Largest `| |dev Sigma_e| - |dev tau| | / |dev tau|` over all samples.
    pub max_norm_mismatch: f64,
    pub max_cone_value: f64,
}

/// Checks, per elastic state, `Sigma_e in E(1/3 sigma_y^2) => tau in E(2/3 sigma_y^2)`
/// and `U_e` inside the ellipticity cone.
pub fn domain_inclusion_check(samples: &[Tensor3], p: &MaterialParams) -> Result<InclusionReport, AnalysisError> {
    let sy2 = p.sigma_y * p.sigma_y;
    let mut r = InclusionReport {
        samples: samples.len(),
        in_sigma_domain: 0,
        tau_violations: 0,
        cone_violations: 0,
        tau_equal_norm_violations: 0,
        max_norm_mismatch: 0.0,
        max_cone_value: 0.0,
    };
    for fe in samples {
        let kin = Kinematics::new(fe)?;
        let s = StressSet::from_kinematics(&kin, p)?;
        let dev_sigma = s.sigma_e_mixed.dev().norm();
        let dev_tau = s.tau.dev().norm();
        if dev_tau > 0.0 {
            r.max_norm_mismatch = r.max_norm_mismatch.max((dev_sigma - dev_tau).abs() / dev_tau);
        }
        if dev_sigma * dev_sigma <= sy2 / 3.0 {
            r.in_sigma_domain += 1;
            if dev_tau * dev_tau > 2.0 / 3.0 * sy2 {
                r.tau_violations += 1;
            }
            if dev_tau * dev_tau > sy2 / 3.0 * (1.0 + 1e-10) {
                r.tau_equal_norm_violations += 1;
            }
            let (value, inside) = cone_membership(&kin.u);
            r.max_cone_value = r.max_cone_value.max(value);
            if !inside {
                r.cone_violations += 1;
            }
        }
    }
    Ok(r)
}

/// Random elastic states with `|dev log U| <= extent`, `|tr log U| <= vol`.
pub fn sample_elastic_states(count: usize, extent: f64, vol: f64, seed: u64) -> Vec<Tensor3> {
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let dev: f64 = rand::Rng::random_range(&mut rng, 0.0..=extent);
            let tr: f64 = rand::Rng::random_range(&mut rng, -vol..=vol);
            let l: [f64; 3] = deviatoric_exponents(dev * dev, tr, &mut rng);
            let u = random_spectral(&l.map(f64::exp), &mut rng);
            super::sampling::random_rotation(&mut rng) * u.to_tensor()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeEscapeReport {
    pub samples: usize,
    /// States outside the cone whose mixed stress is nevertheless inside the elastic domain.
    pub escapes: usize,
    pub min_dev_sigma_sq: f64,
}

/// Rejection search for states outside the ellipticity cone with an
/// admissible mixed stress.
pub fn cone_escape_search(count: usize, p: &MaterialParams, seed: u64) -> Result<ConeEscapeReport, AnalysisError> {
    let region = super::sampling::Region::DevBand { dev_sq_min: CONE_BOUND, dev_sq_max: 4.0 * CONE_BOUND, vol: 1.0 };
    let mut report = ConeEscapeReport { samples: count, escapes: 0, min_dev_sigma_sq: f64::INFINITY };
    for i in 0..count {
        let mut rng = stream_rng(seed, i as u64);
        let fe: Tensor3 = region.sample(&mut rng);
        let s = StressSet::evaluate(&fe, p)?;
        let d = s.sigma_e_mixed.dev().norm_sq();
        report.min_dev_sigma_sq = report.min_dev_sigma_sq.min(d);
        if d <= p.sigma_y * p.sigma_y / 3.0 {
            report.escapes += 1;
        }
    }
    Ok(report)
}
