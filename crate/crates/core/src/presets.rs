//! Reference parameter set for a 1200 km LEO-to-ground downlink.

use crate::link_budget::{LinkParams, TurbulenceParams, VibrationParams};
use crate::scan_model::ScanParams;

/// Gamma-Gamma `(γ, α, β)` for turbulence levels 1 (very weak) through 5 (very strong).
pub const TURBULENCE_LEVELS: [(f64, f64, f64); 5] =
    [(0.90, 21.6, 19.8), (0.58, 8.43, 6.92), (0.36, 4.03, 1.54), (0.27, 4.58, 1.24), (0.21, 6.07, 1.08)];

/// Turbulence preset by level, `1..=5`.
pub fn turbulence(level: usize) -> Option<TurbulenceParams> {
    let (gamma, alpha, beta) = *TURBULENCE_LEVELS.get(level.checked_sub(1)?)?;
    Some(TurbulenceParams { gamma, alpha, beta })
}

pub fn reference_link() -> LinkParams {
    LinkParams {
        distance: 1200e3,
        loss_tx: 0.92,
        loss_rx: 0.92,
        split_ratio: 0.1,
        aperture: 0.30,
        responsivity: 0.88,
        noise_std: 9e-9,
        snr_threshold_db: 20.0,
        power: 0.090,
    }
}

pub fn reference_vibration() -> VibrationParams {
    VibrationParams { sigma: 4e-6, freq: 100.0 }
}

/// Scan geometry used for the pitch sweep reference case: ω = 20 µrad, d = 40 µrad, U = 1.3 mrad.
pub fn reference_scan() -> ScanParams {
    ScanParams {
        omega: 20e-6,
        pitch: 40e-6,
        fou: 1.3e-3,
        speed: 0.4e-3,
        reset_time: 10.0,
        field_prob: 0.95,
        pointing_std: 1e-3,
    }
}
