//! Rank-one convexity (Legendre-Hadamard ellipticity) probes and scans.
//!
//! A probe estimates `d^2/dt^2 W(F + t xi ⊗ eta)` at `t = 0` by a central
//! second difference. Scans draw states from a [`Region`], probe each with a
//! number of random unit directions, and report the smallest value found.
//! Negative values count as a witness of non-ellipticity only if they persist
//! when the step is halved.

use rayon::prelude::*;
use serde::Serialize;

use super::hessian::{rank_one_d2_exact, EnergyPart};
use super::sampling::{random_unit, stream_rng, Region};
use super::AnalysisError;
use crate::constitutive::{log_stretches, MaterialParams};
use crate::tensor::{PosDefSymTensor, Tensor};

/// Upper bound of `|dev_3 log U|^2` for the ellipticity cone of the
/// distortional exponentiated Hencky energy observed in numerical tests.
pub const CONE_BOUND: f64 = 27.0;

/// Principal-stretch interval around the identity on which the quadratic
/// Hencky energy is known to be LH-elliptic (reference value, not re-derived).
pub const HENCKY_LH_STRETCH_INTERVAL: (f64, f64) = (0.21162, 1.39561);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankOneProbe<const N: usize> {
    #[serde(rename = "F")]
    pub f: Tensor<N>,
    #[serde(serialize_with = "slice")]
    pub xi: [f64; N],
    #[serde(serialize_with = "slice")]
    pub eta: [f64; N],
    pub h: f64,
    pub d2: f64,
}

fn slice<S: serde::Serializer, const N: usize>(v: &[f64; N], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter())
}

/// Central second difference of `t -> W(F + t xi ⊗ eta)` with step `h`.
pub fn rank_one_d2<const N: usize>(
    w: impl Fn(&Tensor<N>) -> f64,
    f: &Tensor<N>,
    xi: &[f64; N],
    eta: &[f64; N],
    h: f64,
) -> Result<f64, AnalysisError> {
    let a = Tensor::outer(xi, eta) * h;
    let (plus, minus) = (*f + a, *f - a);
    let (det_plus, det_minus) = (plus.det(), minus.det());
    // det(F + t a) is affine in t, so checking both ends covers the segment
    if !(det_plus > 0.0 && det_minus > 0.0 && f.det() > 0.0) {
        return Err(AnalysisError::OutOfDomain { det_plus, det_minus });
    }
    Ok((w(&plus) - 2.0 * w(f) + w(&minus)) / (h * h))
}

/// `(|dev log U|^2, inside)` with `inside` iff the value is below [`CONE_BOUND`].
pub fn cone_membership<const N: usize>(u: &PosDefSymTensor<N>) -> (f64, bool) {
    let value = u.log().dev().norm_sq();
    (value, value < CONE_BOUND)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSpec {
    pub region: Region,
    pub n_states: usize,
    pub n_dirs: usize,
    pub seed: u64,
    /// Step factor: `h = fd_step * sigma_min(F)`.
    pub fd_step: f64,
    /// Absolute tolerance below which a negative second difference is significant.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport<const N: usize> {
    pub samples: usize,
    pub skipped: usize,
    /// `None` for an empty scan.
    pub min_d2: Option<f64>,
    pub min_probe: Option<RankOneProbe<N>>,
    /// Most negative probe that stayed below `-tolerance` at `h` and `h/2`.
    pub witness: Option<RankOneProbe<N>>,
    pub region: Region,
    pub seed: u64,
}

/// Step used by the scans, relative to the smallest principal stretch of `F`.
pub fn probe_step<const N: usize>(f: &Tensor<N>, fd_step: f64) -> Option<f64> {
    log_stretches(f).map(|l| fd_step * l[0].exp())
}

/// One probe with refinement: below `tolerance` in magnitude (or negative),
/// the value is re-estimated at `h/2` and Richardson-extrapolated.
/// Returns the probe and whether it is a persistent negative.
pub fn refined_probe<const N: usize>(
    w: &impl Fn(&Tensor<N>) -> f64,
    f: &Tensor<N>,
    xi: &[f64; N],
    eta: &[f64; N],
    h: f64,
    tolerance: f64,
) -> Result<(RankOneProbe<N>, bool), AnalysisError> {
    let d_h = rank_one_d2(w, f, xi, eta, h)?;
    if d_h >= tolerance {
        return Ok((RankOneProbe { f: *f, xi: *xi, eta: *eta, h, d2: d_h }, false));
    }
    let d_half = rank_one_d2(w, f, xi, eta, 0.5 * h)?;
    let d2 = (4.0 * d_half - d_h) / 3.0;
    let persistent = d_h < -tolerance && d_half < -tolerance;
    Ok((RankOneProbe { f: *f, xi: *xi, eta: *eta, h, d2 }, persistent))
}

struct StateOutcome<const N: usize> {
    evaluated: usize,
    skipped: usize,
    min: Option<RankOneProbe<N>>,
    witness: Option<RankOneProbe<N>>,
}

fn more_negative<const N: usize>(a: Option<RankOneProbe<N>>, b: Option<RankOneProbe<N>>) -> Option<RankOneProbe<N>> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.d2 < x.d2 { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Deterministic parallel scan with finite-difference probes: state `i` uses
/// random stream `i` of `seed`, and per-state results are reduced in index order.
pub fn scan_rank_one<const N: usize, W>(w: W, spec: &ScanSpec) -> ScanReport<N>
where
    W: Fn(&Tensor<N>) -> f64 + Sync,
{
    scan_with(spec, |f, xi, eta| {
        let h = probe_step(f, spec.fd_step).ok_or(AnalysisError::Degenerate("state outside GL+"))?;
        refined_probe(&w, f, xi, eta, h, spec.tolerance)
    })
}

/// Same sampling as [`scan_rank_one`], with probes evaluated by the closed-form
/// second derivative of the exponentiated Hencky energy. Reported probes carry
/// `h = 0`; a negative value below `-tolerance` is a witness.
pub fn scan_rank_one_exact<const N: usize>(p: &MaterialParams, part: EnergyPart, spec: &ScanSpec) -> ScanReport<N> {
    scan_with(spec, |f, xi, eta| {
        let d2 = rank_one_d2_exact(f, xi, eta, p, part)?;
        Ok((RankOneProbe { f: *f, xi: *xi, eta: *eta, h: 0.0, d2 }, d2 < -spec.tolerance))
    })
}

fn scan_with<const N: usize, P>(spec: &ScanSpec, probe: P) -> ScanReport<N>
where
    P: Fn(&Tensor<N>, &[f64; N], &[f64; N]) -> Result<(RankOneProbe<N>, bool), AnalysisError> + Sync,
{
    let outcomes: Vec<StateOutcome<N>> = (0..spec.n_states)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, i as u64);
            let f: Tensor<N> = spec.region.sample(&mut rng);
            let mut out = StateOutcome { evaluated: 0, skipped: 0, min: None, witness: None };
            for _ in 0..spec.n_dirs {
                let xi = random_unit(&mut rng);
                let eta = random_unit(&mut rng);
                match probe(&f, &xi, &eta) {
                    Ok((pr, persistent)) if pr.d2.is_finite() => {
                        out.evaluated += 1;
                        out.min = more_negative(out.min, Some(pr));
                        if persistent {
                            out.witness = more_negative(out.witness, Some(pr));
                        }
                    }
                    _ => out.skipped += 1,
                }
            }
            out
        })
        .collect();

    let mut report = ScanReport {
        samples: 0,
        skipped: 0,
        min_d2: None,
        min_probe: None,
        witness: None,
        region: spec.region,
        seed: spec.seed,
    };
    for o in outcomes {
        report.samples += o.evaluated;
        report.skipped += o.skipped;
        report.min_probe = more_negative(report.min_probe, o.min);
        report.witness = more_negative(report.witness, o.witness);
    }
    report.min_d2 = report.min_probe.map(|p| p.d2);
    report
}

/// Smallest `|dev_3 log U|^2` band (of width `band`, starting at 0) in which the
/// exact scan finds a negative second derivative; `None` if none below `limit`.
pub fn negative_onset(p: &MaterialParams, part: EnergyPart, band: f64, limit: f64, n_states: usize, n_dirs: usize, seed: u64) -> Option<f64> {
    let mut lo = 0.0;
    while lo < limit {
        let spec = ScanSpec {
            region: Region::DevBand { dev_sq_min: lo, dev_sq_max: lo + band, vol: 0.0 },
            n_states,
            n_dirs,
            seed,
            fd_step: 0.0,
            tolerance: 0.0,
        };
        if scan_rank_one_exact::<3>(p, part, &spec).min_d2.is_some_and(|m| m < 0.0) {
            return Some(lo);
        }
        lo += band;
    }
    None
}
