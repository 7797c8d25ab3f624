//! Transmit power ↔ average received SNR under pointing jitter and
//! Gamma-Gamma turbulence, and the coverage radius that a fixed power buys.
//!
//! All quantities are SI: radians, meters, watts, amperes.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::numerics::bessel_i0e;

/// Static link budget inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Propagation distance `R` in meters.
    pub distance: f64,
    /// Transmitter optical loss factor `s_t`, in (0, 1].
    pub loss_tx: f64,
    /// Receiver optical loss factor `s_r`, in (0, 1].
    pub loss_rx: f64,
    /// Fraction of received light split off for acquisition `s_s`, in (0, 1].
    pub split_ratio: f64,
    /// Receiver aperture diameter `D_r` in meters.
    pub aperture: f64,
    /// Photodetector responsivity `R_r` in A/W.
    pub responsivity: f64,
    /// Noise current standard deviation `σ_n` in amperes.
    pub noise_std: f64,
    /// Average SNR threshold in dB.
    pub snr_threshold_db: f64,
    /// Transmit power `P_t` in watts.
    pub power: f64,
}

impl LinkParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("distance", self.distance),
            ("loss_tx", self.loss_tx),
            ("loss_rx", self.loss_rx),
            ("split_ratio", self.split_ratio),
            ("aperture", self.aperture),
            ("responsivity", self.responsivity),
            ("noise_std", self.noise_std),
            ("power", self.power),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return domain("LinkParams", format!("{name} must be positive and finite, got {v}"));
            }
        }
        for (name, v) in [("loss_tx", self.loss_tx), ("loss_rx", self.loss_rx), ("split_ratio", self.split_ratio)] {
            if v > 1.0 {
                return domain("LinkParams", format!("{name} must not exceed 1, got {v}"));
            }
        }
        if !self.snr_threshold_db.is_finite() {
            return domain("LinkParams", "snr_threshold_db must be finite");
        }
        Ok(())
    }

    /// Noise power `N_0 = σ_n²`.
    pub fn noise_power(&self) -> f64 {
        self.noise_std * self.noise_std
    }

    pub fn snr_threshold_linear(&self) -> f64 {
        10f64.powf(self.snr_threshold_db / 10.0)
    }

    /// `s_t s_r s_s D_r² / (2R²)`: the gain prefactor shared by the pointing-gain formulas.
    fn geometric_factor(&self) -> f64 {
        self.loss_tx * self.loss_rx * self.split_ratio * self.aperture * self.aperture
            / (2.0 * self.distance * self.distance)
    }
}

/// Gamma-Gamma turbulence triple: scale `γ`, large-scale `α`, small-scale `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbulenceParams {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl TurbulenceParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma", self.gamma), ("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return domain("TurbulenceParams", format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

/// Platform vibration: isotropic pointing-jitter std and its sample rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VibrationParams {
    /// Jitter standard deviation `σ` in radians.
    pub sigma: f64,
    /// Vibration frequency `F_V` in hertz; only the physical Monte Carlo mode reads it.
    pub freq: f64,
}

impl VibrationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return domain("VibrationParams", format!("sigma must be >= 0, got {}", self.sigma));
        }
        if !(self.freq > 0.0 && self.freq.is_finite()) {
            return domain("VibrationParams", format!("freq must be > 0, got {}", self.freq));
        }
        Ok(())
    }
}

/// Budget quantities derived for a given divergence angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedBudget {
    /// Link constant `B` (rad²).
    pub b: f64,
    /// Coverage radius `g_{B,σ}(ω)` (rad).
    pub g: f64,
    /// Largest divergence for which the coverage radius is positive (rad).
    pub omega_max: f64,
}

impl DerivedBudget {
    pub fn new(link: &LinkParams, turb: &TurbulenceParams, omega: f64, sigma: f64) -> Result<Self> {
        let b = link_constant(link, turb)?;
        let omega_max = max_divergence(b, sigma);
        let g = coverage_radius(omega, b, sigma)?;
        Ok(Self { b, g, omega_max })
    }
}

/// `E[h_c²] = (α+1)(β+1)γ²/(αβ)` for the Gamma-Gamma fade.
pub fn turbulence_second_moment(turb: &TurbulenceParams) -> Result<f64> {
    turb.validate()?;
    let TurbulenceParams { gamma, alpha, beta } = *turb;
    Ok((alpha + 1.0) * (beta + 1.0) * gamma * gamma / (alpha * beta))
}

/// Rice density of the jittered pointing angle about a mean offset.
pub fn rice_pdf(phi: f64, mean_offset: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return domain("rice_pdf", format!("sigma must be > 0, got {sigma}"));
    }
    if phi < 0.0 || mean_offset < 0.0 {
        return domain("rice_pdf", "phi and mean_offset must be >= 0");
    }
    let s2 = sigma * sigma;
    let z = phi * mean_offset / s2;
    // exp(-(φ-m)²/2σ²)·I0e(z) == exp(-(φ²+m²)/2σ²)·I0(z)
    let d = phi - mean_offset;
    Ok(phi / s2 * (-d * d / (2.0 * s2)).exp() * bessel_i0e(z))
}

/// Gaussian-beam transmission gain at pointing error `phi` for divergence `omega`.
pub fn pointing_gain(phi: f64, omega: f64, link: &LinkParams) -> Result<f64> {
    if !(omega > 0.0) {
        return domain("pointing_gain", format!("omega must be > 0, got {omega}"));
    }
    let peak = 2.0 * link.loss_tx * link.loss_rx * link.split_ratio / (PI * link.distance.powi(2) * omega * omega)
        * PI
        * (link.aperture / 2.0).powi(2);
    Ok(peak * (-2.0 * phi * phi / (omega * omega)).exp())
}

/// `E[h_t²]` when the pointing angle is Rice distributed about `mean_offset` with jitter `sigma`.
pub fn pointing_gain_second_moment(omega: f64, mean_offset: f64, sigma: f64, link: &LinkParams) -> Result<f64> {
    if !(omega > 0.0) {
        return domain("pointing_gain_second_moment", format!("omega must be > 0, got {omega}"));
    }
    if sigma < 0.0 {
        return domain("pointing_gain_second_moment", format!("sigma must be >= 0, got {sigma}"));
    }
    let w2 = omega * omega;
    let u = w2 + 8.0 * sigma * sigma;
    Ok(link.geometric_factor().powi(2) * (-4.0 * mean_offset * mean_offset / u).exp() / (w2 * u))
}

/// Transmit power needed so the average SNR meets the threshold at `tau·pitch` off the beam axis.
pub fn required_power(
    omega: f64,
    pitch: f64,
    tau: f64,
    link: &LinkParams,
    turb: &TurbulenceParams,
    sigma: f64,
) -> Result<f64> {
    link.validate()?;
    turb.validate()?;
    if !(omega > 0.0) {
        return domain("required_power", format!("omega must be > 0, got {omega}"));
    }
    if !(0.0..=0.5).contains(&tau) {
        return domain("required_power", format!("tau must lie in [0, 1/2], got {tau}"));
    }
    let TurbulenceParams { gamma, alpha, beta } = *turb;
    let u = omega * omega + 8.0 * sigma * sigma;
    let offset = tau * pitch;
    let lead = 2.0 * link.distance.powi(2)
        / (link.loss_tx * link.loss_rx * link.split_ratio * gamma * link.aperture.powi(2) * link.responsivity);
    let noise =
        (link.snr_threshold_linear() * link.noise_power() * alpha * beta / ((alpha + 1.0) * (beta + 1.0))).sqrt();
    Ok(lead * noise * omega * u.sqrt() * (2.0 * offset * offset / u).exp())
}

/// Link constant `B` (rad²) aggregating power, losses, turbulence and threshold.
pub fn link_constant(link: &LinkParams, turb: &TurbulenceParams) -> Result<f64> {
    link.validate()?;
    turb.validate()?;
    let n0 = link.noise_power();
    if n0 == 0.0 {
        return domain("link_constant", "noise power is zero");
    }
    let TurbulenceParams { gamma, alpha, beta } = *turb;
    let lead =
        link.power * link.loss_tx * link.loss_rx * link.split_ratio * gamma * link.aperture.powi(2) * link.responsivity
            / (2.0 * link.distance.powi(2));
    Ok(lead * ((alpha + 1.0) * (beta + 1.0) / (link.snr_threshold_linear() * n0 * alpha * beta)).sqrt())
}

/// Coverage radius `g_{B,σ}(ω)`: the deflection at which the average SNR equals the threshold.
pub fn coverage_radius(omega: f64, b: f64, sigma: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return domain("coverage_radius", format!("omega must be > 0, got {omega}"));
    }
    let u = omega * omega + 8.0 * sigma * sigma;
    let log_arg = b / (omega * u.sqrt());
    if !(log_arg > 1.0) {
        return domain(
            "coverage_radius",
            format!("omega = {omega:e} rad is at or beyond the divergence limit {:e} rad", max_divergence(b, sigma)),
        );
    }
    Ok((0.5 * u * log_arg.ln()).sqrt())
}

/// Upper bound on the divergence angle for a positive coverage radius.
pub fn max_divergence(b: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    ((b * b + 16.0 * s2 * s2).sqrt() - 4.0 * s2).sqrt()
}
