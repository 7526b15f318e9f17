use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by the return map and the analysis suite.
///
/// `yield_rel` and `consistency_rel` are relative to `sigma_y^2`; `fd_step`
/// scales second-difference steps; `ellipticity_margin` is relative to
/// `mu + kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSet {
    #[serde(rename = "yield")]
    pub yield_rel: f64,
    #[serde(rename = "consistency")]
    pub consistency_rel: f64,
    pub fd_step: f64,
    pub ellipticity_margin: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        ToleranceSet { yield_rel: 1e-12, consistency_rel: 1e-10, fd_step: 1e-4, ellipticity_margin: 1e-6 }
    }
}

impl ToleranceSet {
    pub fn yield_abs(&self, sigma_y: f64) -> f64 {
        self.yield_rel * sigma_y * sigma_y
    }

    pub fn consistency_abs(&self, sigma_y: f64) -> f64 {
        self.consistency_rel * sigma_y * sigma_y
    }

    /// Names of non-positive (or non-finite) entries.
    pub fn invalid_fields(&self) -> Vec<&'static str> {
        [
            ("yield", self.yield_rel),
            ("consistency", self.consistency_rel),
            ("fd_step", self.fd_step),
            ("ellipticity_margin", self.ellipticity_margin),
        ]
        .into_iter()
        .filter(|(_, v)| !(*v > 0.0 && v.is_finite()))
        .map(|(name, _)| name)
        .collect()
    }
}
