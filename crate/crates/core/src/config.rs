//! Run configuration (JSON).
//!
//! ```json
//! {
//!   "mode": "simulate",
//!   "material": { "mu": 80.0, "kappa": 170.0, "k": 0.25, "k_hat": 0.125, "sigma_y": 0.3, "n": 3 },
//!   "path": { "kind": "simple_shear", "amplitude": 0.1, "steps": 200, "cycle": false },
//!   "tolerances": { "yield": 1e-12, "consistency": 1e-10, "fd_step": 1e-4 },
//!   "seed": 7
//! }
//! ```
//!
//! Every section and field except `mode` is optional. `scan.region` is either
//! a band of the ellipticity cone, `{"cone_min": 0, "cone_max": 26, "vol": 0.5}`,
//! or an explicit region such as `{"kind": "stretch_exponents", "bound": 2}`.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::hessian::EnergyPart;
use crate::analysis::sampling::Region;
use crate::constitutive::MaterialParams;
use crate::tensor::Tensor3;
use crate::tolerance::ToleranceSet;

pub const MODES: [&str; 3] = ["simulate", "scan", "verify"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Simulate,
    Scan,
    Verify,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Scan => "scan",
            Mode::Verify => "verify",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Uniaxial,
    SimpleShear,
    Dilatation,
    Table,
}

/// One row of a tabulated path. Planar runs use the upper-left 2x2 block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TablePoint {
    pub t: f64,
    #[serde(rename = "F")]
    pub f: Tensor3,
}

/// `amplitude` is the peak stretch (uniaxial), shear (simple_shear) or
/// volume ratio (dilatation). `cycle` appends the unloading branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathConfig {
    pub kind: PathKind,
    #[serde(default)]
    pub amplitude: Option<f64>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TablePoint>>,
    #[serde(default)]
    pub cycle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionConfig {
    /// `cone_min <= |dev_3 log U|^2 <= cone_max`, `|tr log U| <= vol`.
    Cone {
        #[serde(default)]
        cone_min: f64,
        cone_max: f64,
        #[serde(default)]
        vol: f64,
    },
    Custom(Region),
}

impl RegionConfig {
    pub fn region(&self) -> Region {
        match *self {
            RegionConfig::Cone { cone_min, cone_max, vol } => Region::DevBand { dev_sq_min: cone_min, dev_sq_max: cone_max, vol },
            RegionConfig::Custom(r) => r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeMethod {
    /// Closed-form second derivative; accurate at large strains.
    #[default]
    Exact,
    /// Central second differences of the energy with `h/2` persistence check.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub region: RegionConfig,
    pub n_states: usize,
    pub n_dirs: usize,
    /// Relative finite-difference step; defaults to `tolerances.fd_step`.
    #[serde(default)]
    pub h: Option<f64>,
    #[serde(default)]
    pub energy: EnergyPart,
    #[serde(default)]
    pub method: ProbeMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "all_suites")]
    pub suites: Vec<String>,
}

fn all_suites() -> Vec<String> {
    vec!["all".to_string()]
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { suites: all_suites() }
    }
}

pub const DEFAULT_SEED: u64 = 20150101;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub material: MaterialParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub tolerances: ToleranceSet,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Output file; the command line `--out` takes precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(mode: Mode) -> Self {
        RunConfig {
            mode,
            material: MaterialParams::default(),
            path: None,
            scan: None,
            verify: VerifyConfig::default(),
            tolerances: ToleranceSet::default(),
            seed: DEFAULT_SEED,
            out: None,
        }
    }

    /// All constraint violations, in schema order.
    pub fn validate(&self) -> Vec<ValidationError> {
        let mut errs = Vec::new();
        let mut push = |field: &str, constraint: &str| errs.push(ValidationError::new(field, constraint));

        if let Err(list) = self.material.validate() {
            for e in list {
                push(&format!("material.{}", e.field), &e.constraint);
            }
        }
        for field in self.tolerances.invalid_fields() {
            push(&format!("tolerances.{field}"), "must be finite and > 0");
        }

        match (self.mode, &self.path) {
            (Mode::Simulate, None) => push("path", "required in simulate mode"),
            (_, Some(path)) => validate_path(path, self.material.n, &mut push),
            _ => {}
        }
        match (self.mode, &self.scan) {
            (Mode::Scan, None) => push("scan", "required in scan mode"),
            (_, Some(scan)) => {
                if let Err(msg) = scan.region.region().validate() {
                    push("scan.region", &msg);
                }
                if scan.n_states == 0 {
                    push("scan.n_states", "must be > 0");
                }
                if scan.n_dirs == 0 {
                    push("scan.n_dirs", "must be > 0");
                }
                if let Some(h) = scan.h {
                    if !(h > 0.0 && h.is_finite()) {
                        push("scan.h", "must be finite and > 0");
                    }
                }
            }
            _ => {}
        }
        if self.verify.suites.is_empty() {
            push("verify.suites", "must name at least one suite");
        } else if let Err(e) = crate::verify::resolve_suites(&self.verify.suites) {
            push("verify.suites", &e.to_string());
        }
        errs
    }
}

fn validate_path(path: &PathConfig, n: usize, push: &mut impl FnMut(&str, &str)) {
    if path.kind == PathKind::Table {
        match &path.table {
            None => push("path.table", "required for kind `table`"),
            Some(rows) if rows.is_empty() => push("path.table", "must have at least one row"),
            Some(rows) => {
                for (i, row) in rows.iter().enumerate() {
                    if !(row.f.is_finite() && row.t.is_finite()) {
                        push(&format!("path.table[{i}]"), "entries must be finite");
                    } else if !(leading_det(&row.f, n) > 0.0) {
                        push(&format!("path.table[{i}].F"), "must have det F > 0");
                    }
                }
                if rows.windows(2).any(|w| !(w[1].t > w[0].t)) {
                    push("path.table", "times must be strictly increasing");
                }
            }
        }
        return;
    }
    match path.steps {
        None => push("path.steps", "required"),
        Some(0) => push("path.steps", "must be > 0"),
        _ => {}
    }
    match path.amplitude {
        None => push("path.amplitude", "required"),
        Some(a) if !a.is_finite() => push("path.amplitude", "must be finite"),
        Some(a) if path.kind != PathKind::SimpleShear && !(a > 0.0) => push("path.amplitude", "must be > 0 for this kind"),
        _ => {}
    }
}

/// Determinant of the block a run of dimension `n` uses.
fn leading_det(f: &Tensor3, n: usize) -> f64 {
    if n == 2 {
        f[(0, 0)] * f[(1, 1)] - f[(0, 1)] * f[(1, 0)]
    } else {
        f.det()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{field}: {constraint}")]
pub struct ValidationError {
    pub field: String,
    pub constraint: String,
}

impl ValidationError {
    pub fn new(field: &str, constraint: &str) -> Self {
        ValidationError { field: field.to_string(), constraint: constraint.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid configuration:\n{}", .0.iter().map(|e| format!("  - {e}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<ValidationError>),
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with_mode(text, None)
}

/// Like [`parse_config`]; `mode` fills in a missing `"mode"` entry and must
/// agree with a present one.
pub fn parse_config_with_mode(text: &str, mode: Option<Mode>) -> Result<RunConfig, ConfigError> {
    let mut value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ConfigError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    let Some(object) = value.as_object_mut() else {
        return Err(ConfigError::Validation(vec![ValidationError::new("", "top level must be an object")]));
    };

    let mut errs = Vec::new();
    let allowed = format!("must be one of: {}", MODES.join(", "));
    let placeholder = serde_json::Value::String(mode.unwrap_or(Mode::Verify).as_str().into());
    match object.get("mode") {
        None if mode.is_some() => {
            object.insert("mode".into(), placeholder);
        }
        None => {
            errs.push(ValidationError::new("mode", &format!("missing; {allowed}")));
            object.insert("mode".into(), placeholder);
        }
        Some(serde_json::Value::String(s)) if MODES.contains(&s.as_str()) => {
            if let Some(m) = mode.filter(|m| m.as_str() != s) {
                errs.push(ValidationError::new("mode", &format!("`{s}` in the file conflicts with the `{m}` command")));
            }
        }
        Some(other) => {
            errs.push(ValidationError::new("mode", &format!("unknown mode {other}; {allowed}")));
            object.insert("mode".into(), placeholder);
        }
    }

    let config: RunConfig = match serde_path_to_error::deserialize(value) {
        Ok(c) => c,
        Err(e) => {
            let field = e.path().to_string();
            errs.push(ValidationError { field, constraint: e.into_inner().to_string() });
            return Err(ConfigError::Validation(errs));
        }
    };
    errs.extend(config.validate());
    if errs.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Validation(errs))
    }
}

pub fn to_json(config: &RunConfig) -> String {
    serde_json::to_string_pretty(config).expect("configuration is always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(r#"{"mode": "verify"}"#).unwrap();
        assert_eq!(c.material.k, 0.25);
        assert_eq!(c.material.k_hat, 0.125);
        assert_eq!(c.material.n, 3);
        assert_eq!(c.material, MaterialParams::default());
        assert_eq!(c.tolerances, ToleranceSet::default());
        assert_eq!(c.verify.suites, vec!["all"]);
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn negative_mu_is_named() {
        let err = parse_config(r#"{"mode": "verify", "material": {"mu": -1}}"#).unwrap_err();
        let ConfigError::Validation(errs) = err else { panic!() };
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].field, "material.mu");
    }

    #[test]
    fn unknown_mode_lists_allowed() {
        let err = parse_config(r#"{"mode": "fly"}"#).unwrap_err();
        let msg = err.to_string();
        for m in MODES {
            assert!(msg.contains(m), "{msg}");
        }
    }

    #[test]
    fn all_errors_are_collected() {
        let text = r#"{"mode": "simulate", "material": {"mu": 0, "kappa": -3, "n": 4}, "tolerances": {"fd_step": 0}}"#;
        let ConfigError::Validation(errs) = parse_config(text).unwrap_err() else { panic!() };
        let fields: Vec<_> = errs.iter().map(|e| e.field.as_str()).collect();
        assert_eq!(fields, ["material.mu", "material.kappa", "material.n", "tolerances.fd_step", "path"]);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_config("{\n  \"mode\": \"scan\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn type_errors_name_the_field() {
        let ConfigError::Validation(errs) = parse_config(r#"{"mode": "verify", "material": {"mu": "big"}}"#).unwrap_err() else {
            panic!()
        };
        assert_eq!(errs[0].field, "material.mu");
    }

    #[test]
    fn region_forms() {
        let c = parse_config(r#"{"mode": "scan", "scan": {"region": {"cone_max": 26}, "n_states": 1, "n_dirs": 1}}"#).unwrap();
        assert_eq!(c.scan.unwrap().region.region(), Region::DevBand { dev_sq_min: 0.0, dev_sq_max: 26.0, vol: 0.0 });
        let c = parse_config(r#"{"mode": "scan", "scan": {"region": {"kind": "stretch_exponents", "bound": 2}, "n_states": 1, "n_dirs": 1}}"#)
            .unwrap();
        assert_eq!(c.scan.unwrap().region.region(), Region::StretchExponents { bound: 2.0 });
    }

    #[test]
    fn mode_override() {
        let c = parse_config_with_mode(r#"{"path": {"kind": "uniaxial", "amplitude": 1.1, "steps": 3}}"#, Some(Mode::Simulate)).unwrap();
        assert_eq!(c.mode, Mode::Simulate);
        assert!(parse_config_with_mode(r#"{"mode": "scan"}"#, Some(Mode::Verify)).is_err());
    }

    #[test]
    fn table_rows_are_checked() {
        let text = r#"{"mode": "simulate", "path": {"kind": "table", "table": [
            {"t": 1, "F": [[1,0,0],[0,1,0],[0,0,1]]},
            {"t": 0.5, "F": [[-1,0,0],[0,1,0],[0,0,1]]}]}}"#;
        let ConfigError::Validation(errs) = parse_config(text).unwrap_err() else { panic!() };
        let fields: Vec<_> = errs.iter().map(|e| e.field.as_str()).collect();
        assert_eq!(fields, ["path.table[1].F", "path.table"]);
    }
}
