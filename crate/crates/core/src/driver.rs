//! Configuration-driven runs behind the `hencky` binary.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::hessian::EnergyPart;
use crate::analysis::rank_one::{scan_rank_one, scan_rank_one_exact, ScanSpec};
use crate::config::{ConfigError, Mode, PathConfig, PathKind, ProbeMethod, RunConfig, ScanConfig};
use crate::constitutive::{energy_eh, energy_eh_iso, energy_eh_vol, MaterialParams};
use crate::path::{drive_path, History, LoadPath};
use crate::plasticity::PlasticState;
use crate::tensor::Tensor;
use crate::tolerance::ToleranceSet;
use crate::verify::{run_suites, VerifyError};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_VERIFICATION_FAILURE: i32 = 1;
pub const EXIT_CONFIG_ERROR: i32 = 2;
pub const EXIT_NUMERICAL_FAILURE: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => EXIT_CONFIG_ERROR,
            RunError::Numerical(_) => EXIT_NUMERICAL_FAILURE,
        }
    }
}

impl From<VerifyError> for RunError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::UnknownSuite(_) => RunError::Config(ConfigError::Validation(vec![crate::config::ValidationError::new(
                "verify.suites",
                &e.to_string(),
            )])),
            VerifyError::Numerical { .. } => RunError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Simulated { rows: usize },
    Scanned { min_d2: Option<f64>, witness: bool },
    Verified { pass: bool },
}

impl RunOutcome {
    /// A scan witness is a finding, not a failure; only failed suites give a nonzero code.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunOutcome::Verified { pass: false } => EXIT_VERIFICATION_FAILURE,
            _ => EXIT_SUCCESS,
        }
    }
}

/// Runs `config` and writes the result to `out`.
pub fn run(config: &RunConfig, out: &Path) -> Result<RunOutcome, RunError> {
    let errs = config.validate();
    if !errs.is_empty() {
        return Err(ConfigError::Validation(errs).into());
    }
    match (config.mode, config.material.n) {
        (Mode::Simulate, 2) => simulate::<2>(config, out),
        (Mode::Simulate, _) => simulate::<3>(config, out),
        (Mode::Scan, 2) => scan::<2>(config, out),
        (Mode::Scan, _) => scan::<3>(config, out),
        (Mode::Verify, _) => {
            let report = run_suites(&config.verify.suites, &config.material, &config.tolerances, config.seed)?;
            write_json(out, &report)?;
            Ok(RunOutcome::Verified { pass: report.pass })
        }
    }
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> RunError + '_ {
    move |source| RunError::Io { path: path.to_path_buf(), source }
}

fn write_json<T: serde::Serialize>(out: &Path, value: &T) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| RunError::Numerical(e.to_string()))?;
    text.push('\n');
    std::fs::write(out, text).map_err(io_err(out))
}

/// The load path described by `cfg`; planar runs take the upper-left block of tabulated `F`.
pub fn build_path<const N: usize>(cfg: &PathConfig) -> LoadPath<N> {
    let amplitude = cfg.amplitude.unwrap_or(1.0);
    let steps = cfg.steps.unwrap_or(1);
    let path = match cfg.kind {
        PathKind::Uniaxial => LoadPath::uniaxial(amplitude, steps),
        PathKind::SimpleShear => LoadPath::simple_shear(amplitude, steps),
        PathKind::Dilatation => LoadPath::dilatation(amplitude, steps),
        PathKind::Table => LoadPath::table(
            cfg.table
                .iter()
                .flatten()
                .map(|row| (row.t, Tensor::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| row.f[(i, j)])))))
                .collect(),
        ),
    };
    if cfg.cycle {
        path.with_unloading()
    } else {
        path
    }
}

fn simulate<const N: usize>(config: &RunConfig, out: &Path) -> Result<RunOutcome, RunError> {
    let Some(path_cfg) = &config.path else {
        return Err(ConfigError::Validation(vec![crate::config::ValidationError::new("path", "required in simulate mode")]).into());
    };
    let path = build_path::<N>(path_cfg);
    let (history, _) = drive_path(&path, PlasticState::default(), &config.material, &config.tolerances)
        .map_err(|e| RunError::Numerical(e.to_string()))?;
    let file = File::create(out).map_err(io_err(out))?;
    emit_history(&history, BufWriter::new(file)).map_err(io_err(out))?;
    Ok(RunOutcome::Simulated { rows: history.len() })
}

/// Column names of the history table.
pub fn history_header() -> Vec<String> {
    let mut h: Vec<String> = vec!["step".into(), "t".into()];
    for i in 1..=3 {
        for j in 1..=3 {
            h.push(format!("F{i}{j}"));
        }
    }
    h.extend(["det_Fp", "dev_log_Ue", "delta_gamma", "gamma_acc", "energy", "dissipation_cum"].map(String::from));
    for name in ["tau", "sigma"] {
        for c in ["11", "22", "33", "12", "23", "13"] {
            h.push(format!("{name}{c}"));
        }
    }
    h.push("f".into());
    h
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `history` as CSV: one header row, then one row per step with
/// floats in 17 significant digits. Planar tensors are embedded in 3x3 with
/// `F33 = 1` and zero out-of-plane stress components.
pub fn emit_history<const N: usize, W: Write>(history: &History<N>, writer: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(history_header())?;
    for s in &history.steps {
        let mut row = vec![s.step.to_string(), num(s.t)];
        row.extend(s.f.embed3(true).iter().flatten().map(|&x| num(x)));
        row.extend([s.fp.det(), s.dev_log_ue, s.delta_gamma, s.gamma_acc, s.energy, s.dissipation_cum].map(num));
        row.extend(s.stresses.tau.voigt6().map(num));
        row.extend(s.stresses.sigma.voigt6().map(num));
        row.push(num(s.f_yield));
        w.write_record(&row)?;
    }
    w.flush()
}

/// The scan described by `cfg`, with tolerance `ellipticity_margin * (mu + kappa)`.
pub fn scan_spec(cfg: &ScanConfig, p: &MaterialParams, tol: &ToleranceSet, seed: u64) -> ScanSpec {
    ScanSpec {
        region: cfg.region.region(),
        n_states: cfg.n_states,
        n_dirs: cfg.n_dirs,
        seed,
        fd_step: cfg.h.unwrap_or(tol.fd_step),
        tolerance: tol.ellipticity_margin * (p.mu + p.kappa),
    }
}

fn scan<const N: usize>(config: &RunConfig, out: &Path) -> Result<RunOutcome, RunError> {
    let Some(cfg) = &config.scan else {
        return Err(ConfigError::Validation(vec![crate::config::ValidationError::new("scan", "required in scan mode")]).into());
    };
    let p = config.material;
    let spec = scan_spec(cfg, &p, &config.tolerances, config.seed);
    let report = match cfg.method {
        ProbeMethod::Exact => scan_rank_one_exact::<N>(&p, cfg.energy, &spec),
        ProbeMethod::FiniteDifference => match cfg.energy {
            EnergyPart::Full => scan_rank_one(|f: &Tensor<N>| energy_eh(f, &p), &spec),
            EnergyPart::Distortional => scan_rank_one(|f: &Tensor<N>| energy_eh_iso(f, &p), &spec),
            EnergyPart::Volumetric => scan_rank_one(|f: &Tensor<N>| energy_eh_vol(f, &p), &spec),
        },
    };
    write_json(out, &report)?;
    Ok(RunOutcome::Scanned { min_d2: report.min_d2, witness: report.witness.is_some() })
}
