//! Verification suites. Each suite checks one structural property of the
//! model on a fixed, seeded sample and returns a JSON-serializable report.
//!
//! Reports contain no timing or other run-dependent data, so two runs with the
//! same seed serialize to identical bytes.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::estimates::{
    cone_escape_search, domain_inclusion_check, lemma2_search, sample_elastic_states, sample_monotonicity_pairs,
    sigma_y_for_extent, tsts_monotonicity, unloading_ellipticity, MatrixClass,
};
use crate::analysis::hessian::{rank_one_d2_exact, EnergyPart};
use crate::analysis::rank_one::{negative_onset, scan_rank_one, scan_rank_one_exact, ScanSpec};
use crate::analysis::sampling::{random_conditioned, random_symmetric, random_unit, stream_rng, Region};
use crate::analysis::AnalysisError;
use crate::constitutive::{energy_eh, energy_eh_excess, energy_eh_iso, MaterialParams, StressSet};
use crate::path::{drive_path, LoadPath};
use crate::plasticity::{PlasticState, PlasticityError};
use crate::tensor::{sym_exp, SymTensor, Tensor, Tensor2, Tensor3};
use crate::tolerance::ToleranceSet;

pub const SUITES: [&str; 12] = [
    "lemma2",
    "isotropic_norm",
    "stress_consistency",
    "small_strain",
    "rank_one_2d",
    "witness_3d",
    "cone_3d",
    "lemma21",
    "tsts",
    "flow_rule",
    "elastic_roundtrip",
    "domain_inclusion",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}` (allowed: all, {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("suite `{suite}`: {message}")]
    Numerical { suite: &'static str, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub property: String,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

/// Expands `all` and rejects unknown names, keeping the given order.
pub fn resolve_suites(names: &[String]) -> Result<Vec<&'static str>, VerifyError> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(SUITES);
        } else {
            let s = SUITES.iter().find(|s| **s == name).ok_or_else(|| VerifyError::UnknownSuite(name.clone()))?;
            out.push(*s);
        }
    }
    Ok(out)
}

pub fn run_suites(names: &[String], base: &MaterialParams, tol: &ToleranceSet, seed: u64) -> Result<VerifyReport, VerifyError> {
    let suites = resolve_suites(names)?
        .into_iter()
        .map(|s| run_suite(s, base, tol, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VerifyReport { seed, pass: suites.iter().all(|s| s.pass), suites })
}

pub fn run_suite(name: &str, base: &MaterialParams, tol: &ToleranceSet, seed: u64) -> Result<SuiteReport, VerifyError> {
    let base3 = MaterialParams { n: 3, ..*base };
    let (suite, property, pass, details) = match name {
        "lemma2" => suite_lemma2(seed),
        "isotropic_norm" => suite_isotropic_norm(&base3, seed)?,
        "stress_consistency" => suite_stress_consistency(&base3, seed),
        "small_strain" => suite_small_strain(&base3, seed),
        "rank_one_2d" => suite_rank_one_2d(base, tol, seed),
        "witness_3d" => suite_witness_3d(&base3, tol, seed)?,
        "cone_3d" => suite_cone_3d(&base3, tol, seed),
        "lemma21" => suite_lemma21(&base3, tol, seed)?,
        "tsts" => suite_tsts(&base3, seed),
        "flow_rule" => suite_flow_rule(&base3, tol)?,
        "elastic_roundtrip" => suite_elastic_roundtrip(&base3, tol)?,
        "domain_inclusion" => suite_domain_inclusion(&base3, seed)?,
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    };
    Ok(SuiteReport { suite: suite.to_string(), pass, property: property.to_string(), details })
}

type Outcome = (&'static str, &'static str, bool, Value);

fn numerical(suite: &'static str) -> impl Fn(String) -> VerifyError {
    move |message| VerifyError::Numerical { suite, message }
}

fn analysis_err(suite: &'static str) -> impl Fn(AnalysisError) -> VerifyError {
    move |e| numerical(suite)(e.to_string())
}

fn plasticity_err(suite: &'static str) -> impl Fn(PlasticityError) -> VerifyError {
    move |e| numerical(suite)(e.to_string())
}

fn suite_lemma2(seed: u64) -> Outcome {
    const SAMPLES: usize = 100_000;
    const MAX_COND: f64 = 1e3;
    let sym = lemma2_search(MatrixClass::Symmetric, SAMPLES, MAX_COND, seed);
    let skew = lemma2_search(MatrixClass::Skew, 10_000, MAX_COND, seed.wrapping_add(1));
    let general = lemma2_search(MatrixClass::General, 10_000, MAX_COND, seed.wrapping_add(2));
    let threshold = 0.5 - 1e-12;
    (
        "lemma2",
        "|Fe^T S Fe^{-T}|^2 / |S|^2 >= 1/2 for symmetric S",
        sym.min_ratio >= threshold,
        json!({
            "samples": SAMPLES,
            "max_cond": MAX_COND,
            "threshold": threshold,
            "min_ratio_symmetric": sym.min_ratio,
            "min_ratio_skew": skew.min_ratio,
            "min_ratio_general": general.min_ratio,
        }),
    )
}

fn suite_isotropic_norm(p: &MaterialParams, seed: u64) -> Result<Outcome, VerifyError> {
    const SAMPLES: usize = 10_000;
    let region = Region::StretchExponents { bound: 1.5 };
    let mut max_dev_rel = 0.0f64;
    let mut max_tr_rel = 0.0f64;
    for i in 0..SAMPLES {
        let fe: Tensor3 = region.sample(&mut stream_rng(seed, i as u64));
        let s = StressSet::evaluate(&fe, p).map_err(|e| numerical("isotropic_norm")(e.to_string()))?;
        let dev_tau = s.tau.dev().norm();
        let dev_sigma = s.sigma_e_mixed.dev().norm();
        if dev_tau > 0.0 {
            max_dev_rel = max_dev_rel.max((dev_sigma - dev_tau).abs() / dev_tau);
        }
        let scale = s.tau.norm();
        if scale > 0.0 {
            max_tr_rel = max_tr_rel.max((s.sigma_e_mixed.trace() - s.tau.trace()).abs() / scale);
        }
    }
    Ok((
        "isotropic_norm",
        "|dev Sigma_e| = |dev tau| and tr Sigma_e = tr tau",
        max_dev_rel <= 1e-10 && max_tr_rel <= 1e-12,
        json!({
            "samples": SAMPLES,
            "region": region,
            "max_dev_norm_rel_diff": max_dev_rel,
            "max_trace_diff_over_norm": max_tr_rel,
            "dev_threshold": 1e-10,
            "trace_threshold": 1e-12,
        }),
    ))
}

/// Orthonormal basis of symmetric 3x3 tensors.
fn sym_basis() -> [SymTensor<3>; 6] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let e = |i: usize, j: usize| {
        let mut t = Tensor3::zero();
        if i == j {
            t[(i, i)] = 1.0;
        } else {
            t[(i, j)] = r;
            t[(j, i)] = r;
        }
        SymTensor::from_tensor(&t)
    };
    [e(0, 0), e(1, 1), e(2, 2), e(0, 1), e(1, 2), e(0, 2)]
}

fn suite_stress_consistency(p: &MaterialParams, seed: u64) -> Outcome {
    const SAMPLES: usize = 1000;
    const H: f64 = 1e-5;
    let basis = sym_basis();
    let w = |l: &SymTensor<3>| energy_eh_excess(sym_exp(l).as_tensor(), p);
    let mut max_rel = 0.0f64;
    for i in 0..SAMPLES {
        let mut rng = stream_rng(seed, i as u64);
        let dir = random_symmetric::<3, _>(&mut rng);
        let radius: f64 = rand::Rng::random_range(&mut rng, 0.0..=1.0);
        if dir.norm() == 0.0 || radius == 0.0 {
            continue;
        }
        let log_v = dir * (radius / dir.norm());
        let tau = crate::constitutive::kirchhoff_from_log_v(&log_v, p);
        let fd = basis.iter().fold(SymTensor::zero(), |acc, e| {
            let d = (w(&(log_v + *e * H)) - w(&(log_v - *e * H))) / (2.0 * H);
            acc + *e * d
        });
        max_rel = max_rel.max((fd - tau).norm() / tau.norm());
    }
    (
        "stress_consistency",
        "tau = dW/dlog V",
        max_rel <= 1e-6,
        json!({ "samples": SAMPLES, "max_log_v_norm": 1.0, "h": H, "max_rel_error": max_rel, "threshold": 1e-6 }),
    )
}

/// Least-squares slope of `log err` against `log t`.
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Convergence order of `W_eH(1 + tH) - Q(t H)` with the linearised quadratic form `Q`.
pub fn small_strain_order<const N: usize>(p: &MaterialParams, h: &Tensor<N>) -> (f64, Vec<(f64, f64)>) {
    let quadratic = |g: &Tensor<N>| {
        let eps = g.sym();
        let tr = eps.trace();
        p.mu * eps.dev().norm_sq() + 0.5 * p.kappa * tr * tr
    };
    let points: Vec<(f64, f64)> = (0..7)
        .map(|i| {
            let t = 0.05 * 0.5f64.powi(i);
            let g = *h * t;
            (t, (energy_eh_excess(&(Tensor::identity() + g), p) - quadratic(&g)).abs())
        })
        .collect();
    (loglog_slope(&points), points)
}

fn suite_small_strain(p3: &MaterialParams, seed: u64) -> Outcome {
    let mut rng = stream_rng(seed, 0);
    let h3: Tensor3 = crate::analysis::sampling::random_general(&mut rng);
    let h2: Tensor2 = crate::analysis::sampling::random_general(&mut rng);
    let (order3, pts3) = small_strain_order(p3, &h3);
    let p2 = MaterialParams { n: 2, kappa: p3.mu + p3.lambda(), ..*p3 };
    let (order2, pts2) = small_strain_order(&p2, &h2);
    (
        "small_strain",
        "W_eH - quadratic form = O(|F - 1|^3)",
        order3 >= 2.9 && order2 >= 2.9,
        json!({
            "order_3d": order3,
            "order_2d": order2,
            "threshold": 2.9,
            "kappa_2d": p2.kappa,
            "errors_3d": pts3,
            "errors_2d": pts2,
        }),
    )
}

fn suite_rank_one_2d(base: &MaterialParams, tol: &ToleranceSet, seed: u64) -> Outcome {
    let p = MaterialParams { n: 2, ..*base }.with_exponents(0.25, 0.125);
    let threshold = -1e-6 * (p.mu + p.kappa);
    let spec = ScanSpec {
        region: Region::StretchExponents { bound: 2.0 },
        n_states: 1000,
        n_dirs: 10,
        seed,
        fd_step: tol.fd_step,
        tolerance: tol.ellipticity_margin * (p.mu + p.kappa),
    };
    let report = scan_rank_one(|f: &Tensor2| energy_eh(f, &p), &spec);
    let pass = report.skipped == 0 && report.min_d2.is_some_and(|m| m >= threshold);
    ("rank_one_2d", "planar W_eH with k = 1/4, k_hat = 1/8 is rank-one convex", pass, json!({ "k": p.k, "k_hat": p.k_hat, "threshold": threshold, "scan": report }))
}

fn suite_witness_3d(base: &MaterialParams, tol: &ToleranceSet, seed: u64) -> Result<Outcome, VerifyError> {
    let p = *base;
    let spec = ScanSpec {
        region: Region::DevBand { dev_sq_min: 100.0, dev_sq_max: 150.0, vol: 0.5 },
        // negative directions are rare at these states
        n_states: 1000,
        n_dirs: 100,
        seed,
        fd_step: tol.fd_step,
        tolerance: tol.ellipticity_margin * (p.mu + p.kappa),
    };
    // singular values of F spread over ~e^16 here, so second differences of W
    // are dominated by roundoff; the closed form decides
    let exact = scan_rank_one_exact::<3>(&p, EnergyPart::Full, &spec);
    let fd = scan_rank_one(|f: &Tensor3| energy_eh(f, &p), &spec);
    let confirmed = match &exact.witness {
        Some(w) => {
            // the sign must survive a relative perturbation of the state
            let g = w.f * (1.0 + 1e-6);
            Some(rank_one_d2_exact(&g, &w.xi, &w.eta, &p, EnergyPart::Full).map_err(analysis_err("witness_3d"))? < 0.0)
        }
        None => None,
    };
    let pass = confirmed == Some(true);
    Ok((
        "witness_3d",
        "3D W_eH is not rank-one convex far outside the cone",
        pass,
        json!({ "k": p.k, "scan": exact, "witness_stable": confirmed, "fd_min_d2": fd.min_d2 }),
    ))
}

fn suite_cone_3d(base: &MaterialParams, tol: &ToleranceSet, seed: u64) -> Outcome {
    let p = base.with_exponents(3.0 / 16.0, base.k_hat);
    let spec = ScanSpec {
        region: Region::DevBand { dev_sq_min: 0.0, dev_sq_max: 26.0, vol: 0.5 },
        n_states: 1000,
        n_dirs: 10,
        seed,
        fd_step: tol.fd_step,
        tolerance: tol.ellipticity_margin * (p.mu + p.kappa),
    };
    let exact = scan_rank_one_exact::<3>(&p, EnergyPart::Distortional, &spec);
    let fd = scan_rank_one(|f: &Tensor3| energy_eh_iso(f, &p), &spec);
    let onset = negative_onset(&p, EnergyPart::Distortional, 0.25, 27.0, 500, 20, seed);
    (
        "cone_3d",
        "distortional W_eH with k = 3/16 is LH-elliptic for |dev log U|^2 <= 26",
        exact.witness.is_none() && fd.witness.is_none(),
        json!({
            "k": p.k,
            "scan": exact,
            "fd_min_d2": fd.min_d2,
            "fd_witness_found": fd.witness.is_some(),
            "negative_onset_dev_sq": onset,
        }),
    )
}

fn suite_lemma21(p: &MaterialParams, tol: &ToleranceSet, seed: u64) -> Result<Outcome, VerifyError> {
    const SAMPLES: usize = 1000;
    let region = Region::StretchExponents { bound: 0.5 };
    let mut max_rel = 0.0f64;
    for i in 0..SAMPLES {
        let mut rng = stream_rng(seed, i as u64);
        let f: Tensor3 = region.sample(&mut rng);
        let g: Tensor3 = random_conditioned(10.0, &mut rng);
        let fp = g * (1.0 / g.det().cbrt());
        let xi = random_unit(&mut rng);
        let eta = random_unit(&mut rng);
        let fe = f * fp.try_inverse().ok_or_else(|| numerical("lemma21")("singular Fp".into()))?;
        // both sides sample W at the same points, so truncation error cancels
        // and a larger step only reduces roundoff
        let h = crate::analysis::rank_one::probe_step(&fe, 10.0 * tol.fd_step).ok_or_else(|| numerical("lemma21")("Fe outside GL+".into()))?;
        let (lhs, rhs) = unloading_ellipticity(|x: &Tensor3| energy_eh_excess(x, p), &f, &fp, &xi, &eta, h).map_err(analysis_err("lemma21"))?;
        max_rel = max_rel.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0));
    }
    Ok((
        "lemma21",
        "D^2 W(F Fp^{-1}).(xi⊗eta)^2 = D^2 W(Fe).(xi⊗Fp^{-T}eta)^2",
        max_rel <= 1e-5,
        json!({ "samples": SAMPLES, "max_rel_diff": max_rel, "threshold": 1e-5 }),
    ))
}

fn suite_tsts(base: &MaterialParams, seed: u64) -> Outcome {
    const PAIRS: usize = 10_000;
    let p = base.with_sigma_y(sigma_y_for_extent(base, 0.1));
    let pairs = sample_monotonicity_pairs::<3>(PAIRS, 0.1, 0.1, &p, seed);
    let r = tsts_monotonicity(&pairs, &p);
    let pass = r.evaluated == PAIRS && r.min_product.is_some_and(|m| m > 0.0);
    ("tsts", "log B -> sigma(log B) is strictly monotone in the elastic domain", pass, json!({ "sigma_y": p.sigma_y, "report": r }))
}

fn suite_flow_rule(p: &MaterialParams, tol: &ToleranceSet) -> Result<Outcome, VerifyError> {
    const STEPS: usize = 1000;
    const GAMMA_MAX: f64 = 0.1;
    let path = LoadPath::<3>::simple_shear(GAMMA_MAX, STEPS);
    let (history, _) = drive_path(&path, PlasticState::default(), p, tol).map_err(plasticity_err("flow_rule"))?;
    let max_det_drift = history.max_det_fp_drift();
    let dissipation_monotone = history.steps.windows(2).all(|w| w[1].dissipation_cum >= w[0].dissipation_cum);
    let min_step_dissipation = history.steps.iter().map(|s| s.dissipation).fold(f64::INFINITY, f64::min);
    let plastic: Vec<_> = history.steps.iter().filter(|s| s.delta_gamma > 0.0).collect();
    let max_f = plastic.iter().map(|s| s.f_yield.abs()).fold(0.0, f64::max);
    let f_bound = 1e-10 * p.sigma_y * p.sigma_y;
    // fully plastic segment: second half of the loading
    let plateau: Vec<f64> = history.steps.iter().filter(|s| s.t >= 0.5).map(|s| s.stresses.tau.as_tensor()[(0, 1)]).collect();
    let (lo, hi) = plateau.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let mean = plateau.iter().sum::<f64>() / plateau.len() as f64;
    let variation = (hi - lo) / mean.abs();
    let pass = !plastic.is_empty() && max_det_drift <= 1e-8 && dissipation_monotone && max_f <= f_bound && variation <= 0.02;
    Ok((
        "flow_rule",
        "plastic incompressibility, non-negative dissipation, consistency and a shear-stress plateau",
        pass,
        json!({
            "steps": STEPS,
            "gamma_max": GAMMA_MAX,
            "plastic_steps": plastic.len(),
            "max_det_fp_drift": max_det_drift,
            "dissipation_non_decreasing": dissipation_monotone,
            "min_step_dissipation": min_step_dissipation,
            "dissipation_total": history.last().map(|s| s.dissipation_cum),
            "max_abs_f_plastic": max_f,
            "f_bound": f_bound,
            "tau12_plateau_min": lo,
            "tau12_plateau_max": hi,
            "tau12_plateau_variation": variation,
        }),
    ))
}

fn suite_elastic_roundtrip(p: &MaterialParams, tol: &ToleranceSet) -> Result<Outcome, VerifyError> {
    // half the uniaxial yield strain in log V
    let log_stretch = 0.5 * p.sigma_y / (2.0 * std::f64::consts::SQRT_2 * p.mu);
    let path = LoadPath::<3>::uniaxial(log_stretch.exp(), 20).with_unloading();
    let (history, state) = drive_path(&path, PlasticState::default(), p, tol).map_err(plasticity_err("elastic_roundtrip"))?;
    let last = history.last().ok_or_else(|| numerical("elastic_roundtrip")("empty history".into()))?;
    let fp_dev = (state.fp - Tensor3::identity()).max_abs();
    let stress = last.stresses.tau.norm().max(last.stresses.sigma.norm()).max(last.stresses.sigma_e_mixed.norm());
    let max_f = history.steps.iter().map(|s| s.f_yield).fold(f64::NEG_INFINITY, f64::max);
    let any_plastic = history.steps.iter().any(|s| s.delta_gamma > 0.0);
    let pass = !any_plastic && fp_dev <= 1e-12 && stress <= 1e-10 * p.sigma_y;
    Ok((
        "elastic_roundtrip",
        "elastic load-unload cycles leave Fp unchanged and end stress-free",
        pass,
        json!({
            "steps": history.len(),
            "peak_stretch": log_stretch.exp(),
            "max_f": max_f,
            "any_plastic_step": any_plastic,
            "final_fp_max_abs_deviation": fp_dev,
            "final_stress_norm": stress,
        }),
    ))
}

fn suite_domain_inclusion(base: &MaterialParams, seed: u64) -> Result<Outcome, VerifyError> {
    const SAMPLES: usize = 10_000;
    let p = base.with_sigma_y(sigma_y_for_extent(base, 0.1));
    let states = sample_elastic_states(SAMPLES, 0.2, 0.2, seed);
    let r = domain_inclusion_check(&states, &p).map_err(analysis_err("domain_inclusion"))?;
    let escape = cone_escape_search(1000, &p, seed.wrapping_add(1)).map_err(analysis_err("domain_inclusion"))?;
    let pass = r.in_sigma_domain > 0 && r.tau_violations == 0 && r.cone_violations == 0 && escape.escapes == 0;
    Ok((
        "domain_inclusion",
        "Sigma_e elastic domain lies inside the tau domain and the ellipticity cone",
        pass,
        json!({ "sigma_y": p.sigma_y, "inclusion": r, "cone_escape": escape }),
    ))
}
