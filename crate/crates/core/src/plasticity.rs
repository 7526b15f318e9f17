//! Multiplicative perfect plasticity `F = Fe Fp` with a von Mises type yield
//! criterion on the mixed-variant stress `Sigma_e = Fe^T tau Fe^{-T}`.
//!
//! The flow rule `dFp/dt Fp^{-1} = gamma_dot N`, `N = dev Sigma_e / |dev Sigma_e|`,
//! is integrated with the exponential map
//!
//! ```text
//! Fp_new = exp(dgamma N_trial) Fp_old
//! ```
//!
//! which keeps `det Fp = 1` because `N` is traceless. The multiplier `dgamma`
//! solves the scalar consistency condition `f(F Fp_new^{-1}) = 0` by a
//! safeguarded Newton iteration.

use thiserror::Error;

use crate::constitutive::{mixed_stress, MaterialParams, StressSet};
use crate::tensor::{mat_exp, SymTensor, Tensor, TensorError};
use crate::tolerance::ToleranceSet;

const MAX_ITERATIONS: usize = 100;
const MAX_BRACKET_GROWTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlasticityError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("return map did not converge after {iterations} iterations (bracket [{lo:e}, {hi:e}], residual {residual:e})")]
    NoConvergence { lo: f64, hi: f64, iterations: usize, residual: f64 },
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<PlasticityError>,
    },
}

/// Internal variables of a material point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasticState<const N: usize> {
    pub fp: Tensor<N>,
    /// Accumulated plastic multiplier.
    pub gamma_acc: f64,
}

impl<const N: usize> Default for PlasticState<N> {
    fn default() -> Self {
        PlasticState { fp: Tensor::identity(), gamma_acc: 0.0 }
    }
}

impl<const N: usize> PlasticState<N> {
    pub fn new(fp: Tensor<N>, gamma_acc: f64) -> Self {
        PlasticState { fp, gamma_acc }
    }
}

/// Elastic predictor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialState<const N: usize> {
    pub fe: Tensor<N>,
    pub stresses: StressSet<N>,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnMapResult<const N: usize> {
    pub state: PlasticState<N>,
    pub fe: Tensor<N>,
    pub delta_gamma: f64,
    pub stresses: StressSet<N>,
    pub f_trial: f64,
    /// Yield function at the returned state.
    pub f_final: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Unit flow direction of a plastic step.
    pub flow_direction: Option<SymTensor<N>>,
    /// Dissipation `dgamma <Sigma_e, N>` of the step.
    pub dissipation: f64,
    /// Cleared if the consistency function was seen increasing in `dgamma`.
    pub monotone_consistency: bool,
}

/// `|dev Sigma_e|^2 - sigma_y^2 / 3`; non-positive inside the elastic domain.
pub fn yield_function<const N: usize>(sigma_e_mixed: &Tensor<N>, p: &MaterialParams) -> f64 {
    sigma_e_mixed.dev().norm_sq() - p.sigma_y * p.sigma_y / 3.0
}

pub fn trial_state<const N: usize>(
    f: &Tensor<N>,
    state: &PlasticState<N>,
    p: &MaterialParams,
) -> Result<TrialState<N>, PlasticityError> {
    let fp_inv = state.fp.try_inverse().ok_or(TensorError::NonInvertible { det: state.fp.det() })?;
    let fe = *f * fp_inv;
    let stresses = StressSet::evaluate(&fe, p)?;
    Ok(TrialState { fe, f: yield_function(&stresses.sigma_e_mixed, p), stresses })
}

/// Reduced dissipation `-<Sigma_e, Fp d/dt[Fp^{-1}]>`; non-negative for admissible evolutions.
///
/// The rate argument is `Fp d/dt[Fp^{-1}] = -dFp/dt Fp^{-1}`.
pub fn dissipation_rate<const N: usize>(sigma_e_mixed: &Tensor<N>, inverse_plastic_rate: &Tensor<N>) -> f64 {
    -sigma_e_mixed.inner(inverse_plastic_rate)
}

/// Elastic predictor followed by an exponential-map plastic corrector.
pub fn return_map<const N: usize>(
    f: &Tensor<N>,
    state: &PlasticState<N>,
    p: &MaterialParams,
    tol: &ToleranceSet,
) -> Result<ReturnMapResult<N>, PlasticityError> {
    let trial = trial_state(f, state, p)?;
    if trial.f <= tol.yield_abs(p.sigma_y) {
        return Ok(ReturnMapResult {
            state: *state,
            fe: trial.fe,
            delta_gamma: 0.0,
            stresses: trial.stresses,
            f_trial: trial.f,
            f_final: trial.f,
            converged: true,
            iterations: 0,
            flow_direction: None,
            dissipation: 0.0,
            monotone_consistency: true,
        });
    }

    // zero plastic spin: the symmetric, traceless part of dev Sigma_e
    let dev_trial = trial.stresses.sigma_e_mixed.sym().dev();
    let n_dir = dev_trial * (1.0 / dev_trial.norm());
    let n_t = n_dir.to_tensor();
    let consistency = |dg: f64| -> Result<f64, PlasticityError> {
        let fe = trial.fe * mat_exp(&(n_t * -dg));
        Ok(yield_function(&mixed_stress(&fe, p)?, p))
    };

    let target = tol.consistency_abs(p.sigma_y);
    let (delta_gamma, iterations, monotone) = solve_consistency(&consistency, trial.f, &trial, p, target)?;

    let fp = mat_exp(&(n_t * delta_gamma)) * state.fp;
    let fp_inv = fp.try_inverse().ok_or(TensorError::NonInvertible { det: fp.det() })?;
    let fe = *f * fp_inv;
    let stresses = StressSet::evaluate(&fe, p)?;
    let f_final = yield_function(&stresses.sigma_e_mixed, p);
    let dissipation = dissipation_rate(&stresses.sigma_e_mixed, &(n_t * -delta_gamma));
    Ok(ReturnMapResult {
        state: PlasticState { fp, gamma_acc: state.gamma_acc + delta_gamma },
        fe,
        delta_gamma,
        stresses,
        f_trial: trial.f,
        f_final,
        converged: f_final.abs() <= target,
        iterations,
        flow_direction: Some(n_dir),
        dissipation,
        monotone_consistency: monotone,
    })
}

/// Safeguarded Newton on `g(dgamma) = 0` with `g(0) = g0 > 0`.
fn solve_consistency<const N: usize>(
    g: &impl Fn(f64) -> Result<f64, PlasticityError>,
    g0: f64,
    trial: &TrialState<N>,
    p: &MaterialParams,
    target: f64,
) -> Result<(f64, usize, bool), PlasticityError> {
    let mut monotone = true;

    // radial-return estimate of the quadratic model as the first bracket end
    let excess = trial.stresses.sigma_e_mixed.dev().norm() - p.sigma_y / 3f64.sqrt();
    let (mut lo, mut g_lo) = (0.0, g0);
    let mut hi = (excess / (2.0 * p.mu)).max(f64::MIN_POSITIVE.sqrt());
    let mut g_hi = g(hi)?;
    let mut growth = 0;
    while g_hi > 0.0 {
        // past the minimum of g the estimate overshot into reversed loading: shrink instead of grow
        let h = 1e-6 * hi;
        if g(hi + h)? > g(hi - h)? {
            let mid = 0.5 * (lo + hi);
            let g_mid = g(mid)?;
            if g_mid <= 0.0 {
                (hi, g_hi) = (mid, g_mid);
                break;
            }
            if g(mid + 1e-6 * mid)? > g(mid - 1e-6 * mid)? {
                (hi, g_hi) = (mid, g_mid);
            } else {
                (lo, g_lo) = (mid, g_mid);
            }
        } else {
            if g_hi > g_lo {
                monotone = false;
            }
            (lo, g_lo) = (hi, g_hi);
            hi *= 2.0;
            g_hi = g(hi)?;
        }
        growth += 1;
        if growth > MAX_BRACKET_GROWTH || !g_hi.is_finite() {
            return Err(PlasticityError::NoConvergence { lo, hi, iterations: 0, residual: g_lo });
        }
    }
    if g_hi.abs() <= target {
        return Ok((hi, 0, monotone));
    }

    let mut x = lo + (hi - lo) * g_lo / (g_lo - g_hi);
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let gx = g(x)?;
        residual = gx;
        if gx.abs() <= target {
            return Ok((x, it, monotone));
        }
        if gx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let h = (1e-6 * x).max(1e-8);
        let slope = (g(x + h)? - g(x - h)?) / (2.0 * h);
        if slope >= 0.0 && gx > 0.0 {
            monotone = false;
        }
        let newton = x - gx / slope;
        x = if slope < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Err(PlasticityError::NoConvergence { lo, hi, iterations: MAX_ITERATIONS, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tensor3;

    fn shear(g: f64) -> Tensor3 {
        Tensor3::from_rows([[1.0, g, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    #[test]
    fn yield_function_examples() {
        let p = MaterialParams::default();
        let sy2 = p.sigma_y * p.sigma_y;
        assert_eq!(yield_function(&Tensor3::zero(), &p), -sy2 / 3.0);
        assert!((yield_function(&Tensor3::scalar(5.0), &p) + sy2 / 3.0).abs() < 1e-15);
        let s = (sy2 / 6.0).sqrt();
        let on_surface = Tensor3::from_diagonal([s, -s, 0.0]);
        assert!(yield_function(&on_surface, &p).abs() < 1e-16);
    }

    #[test]
    fn trial_at_identity_and_full_accommodation() {
        let p = MaterialParams::default();
        let t = trial_state(&Tensor3::identity(), &PlasticState::default(), &p).unwrap();
        assert_eq!(t.f, -p.sigma_y * p.sigma_y / 3.0);
        assert_eq!(t.stresses.tau, SymTensor::zero());

        let f = Tensor3::from_rows([[1.0, 0.3, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let t = trial_state(&f, &PlasticState::new(f, 0.0), &p).unwrap();
        assert!((t.fe - Tensor3::identity()).norm() < 1e-15);
        assert!(t.stresses.tau.norm() < 1e-12);
    }

    #[test]
    fn small_shear_is_elastic() {
        let p = MaterialParams { sigma_y: 100.0, ..MaterialParams::default() };
        let t = trial_state(&shear(1e-4), &PlasticState::default(), &p).unwrap();
        assert!(t.f < 0.0);
        let r = return_map(&shear(1e-4), &PlasticState::default(), &p, &ToleranceSet::default()).unwrap();
        assert_eq!(r.delta_gamma, 0.0);
        assert_eq!(r.state.fp, Tensor3::identity());
    }

    #[test]
    fn plastic_step_lands_on_yield_surface() {
        let p = MaterialParams::default();
        let tol = ToleranceSet::default();
        let r = return_map(&shear(0.05), &PlasticState::default(), &p, &tol).unwrap();
        assert!(r.f_trial > 0.0);
        assert!(r.delta_gamma > 0.0);
        assert!(r.converged);
        assert!(r.f_final.abs() <= 1e-10 * p.sigma_y * p.sigma_y);
        assert!((r.state.fp.det() - 1.0).abs() < 1e-13);
        assert!(r.dissipation > 0.0);
        assert!(r.monotone_consistency);
    }

    #[test]
    fn trial_on_surface_is_elastic() {
        // scale a shear so that the trial state lies on the yield surface
        let p = MaterialParams::default();
        let tol = ToleranceSet::default();
        let (mut lo, mut hi) = (0.0, 0.01);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let f = trial_state(&shear(mid), &PlasticState::default(), &p).unwrap().f;
            if f > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        let r = return_map(&shear(lo), &PlasticState::default(), &p, &tol).unwrap();
        assert!(r.f_trial.abs() <= tol.yield_abs(p.sigma_y));
        assert_eq!(r.delta_gamma, 0.0);
    }

    #[test]
    fn dissipation_rate_examples() {
        let s = Tensor3::from_rows([[1.0, 0.2, 0.0], [0.2, -0.5, 0.1], [0.0, 0.1, 0.3]]);
        assert_eq!(dissipation_rate(&s, &Tensor3::zero()), 0.0);
        let d = s.dev();
        let n = d * (1.0 / d.norm());
        assert!((dissipation_rate(&s, &(-n)) - d.norm()).abs() < 1e-14);
        assert!(dissipation_rate(&d, &Tensor3::scalar(0.7)).abs() < 1e-15);
    }

    #[test]
    fn overshooting_estimate_is_pulled_back() {
        // the first bracket end lands past the root, where g grows again
        let f = Tensor3::from_rows([[0.92345, 0.0, 0.0], [-0.00822, 1.13867, 0.10924], [-0.16012, 0.01130, 1.08465]]);
        let p = MaterialParams::default();
        let r = return_map(&f, &PlasticState::default(), &p, &ToleranceSet::default()).unwrap();
        assert!(r.converged && r.monotone_consistency);
        assert!((r.delta_gamma - 0.2).abs() < 0.01);
    }
}
