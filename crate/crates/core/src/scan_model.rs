//! Archimedean spiral scan: geometry, coverage-factor distribution, the
//! single-scan probability chain and single-scan timing.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Transmitter scan configuration. Angles in radians, times in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanParams {
    /// Beam divergence angle `ω` (1/e² half-angle).
    pub omega: f64,
    /// Spiral pitch `d`: radial spacing between adjacent arms.
    pub pitch: f64,
    /// Field of uncertainty radius `U`.
    pub fou: f64,
    /// Scan speed `v` along the spiral (rad/s).
    pub speed: f64,
    /// Reset time `T_a` between consecutive scans.
    pub reset_time: f64,
    /// Field detection probability `P_V`.
    pub field_prob: f64,
    /// Per-axis std of the initial pointing error `κ`.
    pub pointing_std: f64,
}

impl ScanParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("omega", self.omega > 0.0),
            ("pitch", self.pitch > 0.0),
            ("fou", self.fou > 0.0),
            ("speed", self.speed > 0.0),
            ("reset_time", self.reset_time >= 0.0),
            ("field_prob", self.field_prob > 0.0 && self.field_prob <= 1.0),
            ("pointing_std", self.pointing_std > 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return domain("ScanParams", format!("{name} out of range"));
            }
        }
        let all = [self.omega, self.pitch, self.fou, self.speed, self.reset_time, self.field_prob, self.pointing_std];
        if all.iter().any(|v| !v.is_finite()) {
            return domain("ScanParams", "non-finite field");
        }
        Ok(())
    }

    /// `2πκ²/(vd)`: mean single-scan time with an unbounded FOU.
    pub fn time_scale(&self) -> f64 {
        2.0 * PI * self.pointing_std.powi(2) / (self.speed * self.pitch)
    }

    /// `η = U²/(2κ²)`.
    pub fn eta(&self) -> f64 {
        self.fou * self.fou / (2.0 * self.pointing_std * self.pointing_std)
    }
}

/// Coverage factor `τ ∈ [0, 1/2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CoverageFactor(f64);

impl CoverageFactor {
    /// `min(g/d, 1/2)`; saturates once the coverage radius spans half a pitch.
    pub fn from_radius(g: f64, pitch: f64) -> Self {
        Self((g / pitch).clamp(0.0, 0.5))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_saturated(self) -> bool {
        self.0 >= 0.5
    }
}

/// Receiver position relative to the spiral center (the initial pointing).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverDraw {
    pub rho: f64,
    /// Polar angle in `[0, 2π)`.
    pub theta: f64,
}

impl ReceiverDraw {
    /// Distance along the receiver's radial line to the nearest spiral arm
    /// (or to the origin inside the central ring).
    pub fn radial_arm_distance(&self, pitch: f64) -> f64 {
        let x = self.rho / pitch;
        let f = self.theta / (2.0 * PI);
        let frac = if x < f {
            x.min(f - x)
        } else {
            let k = (x - f).floor();
            let inner = x - f - k;
            inner.min(1.0 - inner)
        };
        frac * pitch
    }

    /// Euclidean distance to the spiral curve. Diagnostic only: the
    /// closed-form coverage distribution is built on the radial metric.
    pub fn curve_distance(&self, pitch: f64) -> f64 {
        let a = pitch / (2.0 * PI);
        let (px, py) = (self.rho * self.theta.cos(), self.rho * self.theta.sin());
        let dist2 = |t: f64| {
            let r = a * t;
            (r * t.cos() - px).powi(2) + (r * t.sin() - py).powi(2)
        };
        let turns = ((self.rho / pitch) - self.theta / (2.0 * PI)).floor().max(0.0) as i64;
        let mut best = self.rho * self.rho;
        for k in (turns - 1).max(0)..=turns + 1 {
            let t0 = self.theta + 2.0 * PI * k as f64;
            let lo = (t0 - PI).max(0.0);
            let t = crate::numerics::golden_section(dist2, lo, t0 + PI, 1e-12);
            best = best.min(dist2(t));
        }
        best.sqrt()
    }
}

/// Which form of the SNR-exceedance probability to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrMode {
    /// `1 + (2τ−1)·exp(−τ²d²/2κ²)`.
    Exact,
    /// `2τ`, valid when `κ ≫ d`.
    #[default]
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthMode {
    Exact,
    #[default]
    Approx,
}

/// Single-scan probability chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityChain {
    pub tau: f64,
    /// Probability that the average SNR exceeds the threshold.
    pub p_snr: f64,
    /// Receiver feedback probability `P_V·P_SNR`.
    pub p_r: f64,
    /// Probability that the receiver lies inside the FOU.
    pub p_u: f64,
    /// Single-scan acquisition probability `P_U·P_R`.
    pub p_s: f64,
}

/// Spiral radius after sweeping polar angle `theta`.
pub fn spiral_radius(theta: f64, pitch: f64) -> f64 {
    pitch / (2.0 * PI) * theta
}

/// Rayleigh CDF: probability that a radial error with per-axis std `kappa` is within `radius`.
pub fn rayleigh_within(radius: f64, kappa: f64) -> f64 {
    -(-radius * radius / (2.0 * kappa * kappa)).exp_m1()
}

/// Field detection probability from the receiver half field angle `V`.
pub fn field_prob_from_half_angle(half_angle: f64, kappa: f64) -> f64 {
    rayleigh_within(half_angle, kappa)
}

/// Density of the coverage factor under Rayleigh pointing error.
pub fn coverage_factor_pdf(tau: f64, pitch: f64, kappa: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&tau) {
        return domain("coverage_factor_pdf", format!("tau must lie in [0, 1/2], got {tau}"));
    }
    let r2 = (pitch / kappa).powi(2);
    Ok(((1.0 - 2.0 * tau) * tau * r2 + 2.0) * (-tau * tau * r2 / 2.0).exp())
}

/// Probability that the received average SNR exceeds the threshold.
pub fn snr_exceed_prob(tau: f64, pitch: f64, kappa: f64, mode: SnrMode) -> Result<f64> {
    if !(0.0..=0.5).contains(&tau) {
        return domain("snr_exceed_prob", format!("tau must lie in [0, 1/2], got {tau}"));
    }
    Ok(match mode {
        SnrMode::Approx => 2.0 * tau,
        SnrMode::Exact => 1.0 + (2.0 * tau - 1.0) * (-(tau * pitch / kappa).powi(2) / 2.0).exp(),
    })
}

/// Probability chain with the default (`2τ`) SNR model.
pub fn probability_chain(scan: &ScanParams, g: f64) -> Result<ProbabilityChain> {
    probability_chain_with(scan, g, SnrMode::Approx)
}

pub fn probability_chain_with(scan: &ScanParams, g: f64, mode: SnrMode) -> Result<ProbabilityChain> {
    if !(g >= 0.0) {
        return domain("probability_chain", format!("coverage radius must be >= 0, got {g}"));
    }
    let tau = CoverageFactor::from_radius(g, scan.pitch).value();
    let p_snr = snr_exceed_prob(tau, scan.pitch, scan.pointing_std, mode)?;
    let p_r = scan.field_prob * p_snr;
    let p_u = rayleigh_within(scan.fou, scan.pointing_std);
    Ok(ProbabilityChain { tau, p_snr, p_r, p_u, p_s: p_u * p_r })
}

/// Arc length of the spiral out to radius `rho`.
pub fn spiral_length(rho: f64, pitch: f64, mode: LengthMode) -> f64 {
    let a = pitch / (2.0 * PI);
    match mode {
        LengthMode::Approx => rho * rho / (2.0 * a),
        LengthMode::Exact => {
            let q = rho / a;
            let root = (1.0 + q * q).sqrt();
            0.5 * (rho * root + a * q.asinh())
        }
    }
}

/// Time to sweep the spiral out to radius `rho` at constant speed.
pub fn single_scan_time(rho: f64, scan: &ScanParams) -> f64 {
    PI * rho * rho / (scan.speed * scan.pitch)
}

/// Time `T_U` to scan the whole FOU.
pub fn fou_scan_time(scan: &ScanParams) -> f64 {
    single_scan_time(scan.fou, scan)
}

/// Density of the single-scan time when the pointing error is Rayleigh (unbounded FOU).
pub fn single_scan_time_pdf(t: f64, scan: &ScanParams) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let rate = 1.0 / scan.time_scale();
    rate * (-rate * t).exp()
}

/// `T_S = ∫_0^{T_U} t f(t) dt`: expected single-scan time restricted to the FOU.
pub fn single_scan_expected_time(scan: &ScanParams) -> f64 {
    let eta = scan.eta();
    scan.time_scale() * (1.0 - (-eta).exp() * (1.0 + eta))
}
