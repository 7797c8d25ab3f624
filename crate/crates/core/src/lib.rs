//! Closed-form multi-scan link acquisition time for beaconless LEO-to-ground
//! optical links, driven by the average received SNR rather than a geometric
//! beam-width threshold.
//!
//! - [`link_budget`]: transmit power ↔ SNR under jitter and Gamma-Gamma fading,
//!   the link constant `B` and coverage radius `g_{B,σ}(ω)`.
//! - [`scan_model`]: spiral geometry, coverage-factor distribution, the
//!   `P_SNR → P_R → P_S` chain and single-scan timing.
//! - [`multiscan`]: acquisition-time CDF and expectation with reset time.
//! - [`optimizer`]: optimal pitch, divergence, FOU and vibration analysis.
//! - [`montecarlo`]: stochastic oracle used to check every closed form.
//!
//! Everything is SI internally: radians, seconds, watts, amperes, meters.

// `!(x > 0.0)` is the intended NaN-rejecting guard throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod link_budget;
pub mod model;
pub mod montecarlo;
pub mod multiscan;
pub mod numerics;
pub mod optimizer;
pub mod presets;
pub mod scan_model;

pub use error::{Error, Result};
pub use link_budget::{DerivedBudget, LinkParams, TurbulenceParams, VibrationParams};
pub use model::{Evaluation, Scenario};
pub use montecarlo::{run_mc, McConfig, McMode, McReport};
pub use multiscan::MultiScanResult;
pub use scan_model::{ProbabilityChain, ScanParams};
