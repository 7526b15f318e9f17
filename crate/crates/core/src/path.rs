//! Prescribed deformation histories and the material-point driver.

use crate::constitutive::{energy_eh, LogStrainInvariants, MaterialParams, StressSet};
use crate::plasticity::{return_map, PlasticState, PlasticityError};
use crate::tensor::Tensor;
use crate::tolerance::ToleranceSet;

/// Deformation gradient samples `(t, F(t))`, starting from `start` at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadPath<const N: usize> {
    pub start: Tensor<N>,
    pub points: Vec<(f64, Tensor<N>)>,
}

impl<const N: usize> LoadPath<N> {
    fn generate(steps: usize, f_of_t: impl Fn(f64) -> Tensor<N>) -> Self {
        let points = (1..=steps)
            .map(|i| {
                let t = i as f64 / steps as f64;
                (t, f_of_t(t))
            })
            .collect();
        LoadPath { start: f_of_t(0.0), points }
    }

    /// `F = diag(1 + (stretch_max - 1) t, 1, ...)`.
    pub fn uniaxial(stretch_max: f64, steps: usize) -> Self {
        Self::generate(steps, |t| {
            let mut d = [1.0; N];
            d[0] = 1.0 + (stretch_max - 1.0) * t;
            Tensor::from_diagonal(d)
        })
    }

    /// `F = 1 + gamma_max t e1 ⊗ e2`.
    pub fn simple_shear(gamma_max: f64, steps: usize) -> Self {
        Self::generate(steps, |t| {
            let mut f = Tensor::identity();
            f[(0, 1)] = gamma_max * t;
            f
        })
    }

    /// Isotropic `F = J(t)^{1/N} 1` with `J` linear from 1 to `j_max`.
    pub fn dilatation(j_max: f64, steps: usize) -> Self {
        Self::generate(steps, |t| Tensor::scalar((1.0 + (j_max - 1.0) * t).powf(1.0 / N as f64)))
    }

    /// Explicit samples; the start state is the identity.
    pub fn table(points: Vec<(f64, Tensor<N>)>) -> Self {
        LoadPath { start: Tensor::identity(), points }
    }

    /// Appends the reversed history so that the path ends at `start`.
    pub fn with_unloading(mut self) -> Self {
        let Some(&(t_end, _)) = self.points.last() else {
            return self;
        };
        let mut back: Vec<(f64, Tensor<N>)> = std::iter::once((0.0, self.start))
            .chain(self.points[..self.points.len() - 1].iter().copied())
            .map(|(t, f)| (2.0 * t_end - t, f))
            .collect();
        back.reverse();
        self.points.extend(back);
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One accepted driver step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathStep<const N: usize> {
    pub step: usize,
    pub t: f64,
    pub f: Tensor<N>,
    pub fe: Tensor<N>,
    pub fp: Tensor<N>,
    pub stresses: StressSet<N>,
    pub delta_gamma: f64,
    pub gamma_acc: f64,
    pub energy: f64,
    pub dev_log_ue: f64,
    pub dissipation: f64,
    pub dissipation_cum: f64,
    pub f_yield: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct History<const N: usize> {
    pub steps: Vec<PathStep<N>>,
}

impl<const N: usize> History<N> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Option<&PathStep<N>> {
        self.steps.last()
    }

    pub fn max_det_fp_drift(&self) -> f64 {
        self.steps.iter().map(|s| (s.fp.det() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Runs the return map along `path`, starting from `state0`.
pub fn drive_path<const N: usize>(
    path: &LoadPath<N>,
    state0: PlasticState<N>,
    p: &MaterialParams,
    tol: &ToleranceSet,
) -> Result<(History<N>, PlasticState<N>), PlasticityError> {
    let mut state = state0;
    let mut history = History { steps: Vec::with_capacity(path.len()) };
    let mut dissipation_cum = 0.0;
    for (i, (t, f)) in path.points.iter().enumerate() {
        let step = i + 1;
        let at_step = |e: PlasticityError| PlasticityError::AtStep { step, source: Box::new(e) };
        let r = return_map(f, &state, p, tol).map_err(at_step)?;
        state = r.state;
        dissipation_cum += r.dissipation;
        let dev_log_ue = LogStrainInvariants::of(&r.fe).map_or(f64::NAN, |inv| inv.dev_sq.sqrt());
        history.steps.push(PathStep {
            step,
            t: *t,
            f: *f,
            fe: r.fe,
            fp: state.fp,
            stresses: r.stresses,
            delta_gamma: r.delta_gamma,
            gamma_acc: state.gamma_acc,
            energy: energy_eh(&r.fe, p),
            dev_log_ue,
            dissipation: r.dissipation,
            dissipation_cum,
            f_yield: r.f_final,
        });
    }
    Ok((history, state))
}
