//! Exponentiated Hencky hyperelasticity coupled to multiplicative
//! finite-strain perfect plasticity.
//!
//! - [`tensor`]: 2x2 / 3x3 tensor algebra (polar decomposition, symmetric
//!   logarithm and exponential, matrix exponential).
//! - [`constitutive`]: exponentiated and quadratic Hencky energies,
//!   Saint-Venant-Kirchhoff, Kirchhoff/Cauchy/mixed-variant/Eshelby stresses.
//! - [`plasticity`] and [`path`]: yield function, exponential-map return
//!   mapping, material-point driver.
//! - [`analysis`]: rank-one convexity scans, ellipticity cone, norm estimates,
//!   stress monotonicity and domain-inclusion checks.
//! - [`verify`], [`config`], [`driver`]: verification suites and the
//!   configuration-driven runner behind the `hencky` binary.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod analysis;
pub mod config;
pub mod constitutive;
pub mod driver;
pub mod path;
pub mod plasticity;
pub mod tensor;
pub mod tolerance;
pub mod verify;

pub use constitutive::{MaterialParams, StressSet};
pub use plasticity::{PlasticState, ReturnMapResult};
pub use tensor::{PosDefSymTensor, SymTensor, Tensor, Tensor2, Tensor3};
pub use tolerance::ToleranceSet;
