//! Optimal spiral pitch, beam divergence, FOU, and the effect of platform
//! vibration on the expected acquisition time.
//!
//! Root solvers are the reference; the polynomial fits are fast paths kept
//! with their original coefficients.

use std::f64::consts::E;

use crate::error::{domain, Result};
use crate::link_budget::{coverage_radius, max_divergence};
use crate::numerics::bisect;
use crate::scan_model::{ProbabilityChain, ScanParams};

const ROOT_REL_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 200;

/// Optimal pitch `2·g_{B,σ}(ω)`, which puts the coverage factor at 1/2.
pub fn optimal_pitch(omega: f64, b: f64, sigma: f64) -> Result<f64> {
    Ok(2.0 * coverage_radius(omega, b, sigma)?)
}

/// Link constant at which `ω` is a stationary point of the coverage radius.
pub fn b_sigma(omega: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    omega * (omega * omega + 8.0 * s2).sqrt() * (1.0 + 4.0 * s2 / (omega * omega)).exp()
}

/// Divergence `2^{5/4}σ` at which [`b_sigma`] is smallest.
pub fn omega_at_b_sigma_min(sigma: f64) -> f64 {
    2f64.powf(1.25) * sigma
}

pub fn b_sigma_min(sigma: f64) -> f64 {
    b_sigma(omega_at_b_sigma_min(sigma), sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BtmMethod {
    /// Bisection on `B_σ(ω) = B` above `2^{5/4}σ`.
    Root,
    /// Larger root of `(ω + 4σ²/ω)² = B/e`.
    Approx,
    /// Cubic fit in `B/B_σ^min` on `[1, 2)`, the approximation above.
    Fit,
}

/// The divergence `ω_btm > 2^{5/4}σ` that maximizes the coverage radius.
pub fn omega_btm(b: f64, sigma: f64, method: BtmMethod) -> Result<f64> {
    let b_min = b_sigma_min(sigma);
    if !(b > b_min) {
        return domain("omega_btm", format!("B = {b:e} must exceed B_sigma_min = {b_min:e}"));
    }
    match method {
        BtmMethod::Root => {
            let lo = omega_at_b_sigma_min(sigma);
            // B_σ(ω) ≥ ω²·e, so ω = sqrt(B) already overshoots
            let hi = b.sqrt().max(lo * 2.0);
            if sigma == 0.0 {
                return Ok((b / E).sqrt());
            }
            bisect(|w| b_sigma(w, sigma) - b, lo, hi, ROOT_REL_TOL, ROOT_MAX_ITER)
        }
        BtmMethod::Approx => Ok(btm_approx(b, sigma)),
        BtmMethod::Fit => {
            let x = b / b_min;
            if x < 2.0 {
                Ok((1.5087 * x.powi(3) - 7.9617 * x * x + 15.913 * x - 6.8278) * sigma)
            } else {
                let bx = b_min * x;
                Ok((bx.sqrt() + (bx - 16.0 * E * sigma * sigma).sqrt()) / (2.0 * E.sqrt()))
            }
        }
    }
}

fn btm_approx(b: f64, sigma: f64) -> f64 {
    let c = (b / E).sqrt();
    0.5 * (c + (c * c - 16.0 * sigma * sigma).max(0.0).sqrt())
}

/// `W(A)`: the divergence above `2^{5/4}σ` whose peak coverage radius equals `A`.
pub fn w_of_a(a: f64, sigma: f64) -> Result<f64> {
    let bound = (2.0 + 2f64.sqrt()) * sigma;
    if a < bound * (1.0 - 1e-12) {
        return domain("w_of_a", format!("A = {a:e} is below (2+√2)σ = {bound:e}"));
    }
    let a2 = a * a;
    let s2 = sigma * sigma;
    let disc = (a2 * a2 - 12.0 * a2 * s2 + 4.0 * s2 * s2).max(0.0);
    Ok((a2 - 6.0 * s2 + disc.sqrt()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceBranch {
    AtLimit,
    AtBtm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaDecision {
    pub omega_opt: f64,
    pub branch: DivergenceBranch,
    /// Present whenever `B > B_σ^min`, even if the limit branch wins.
    pub omega_btm: Option<f64>,
    pub b_sigma_min: f64,
}

/// Optimal divergence given the smallest divergence the laser supports.
pub fn optimal_divergence(b: f64, sigma: f64, omega_limit: f64) -> Result<OmegaDecision> {
    let omega_max = max_divergence(b, sigma);
    if !(omega_limit > 0.0 && omega_limit < omega_max) {
        return domain("optimal_divergence", format!("omega_limit = {omega_limit:e} must lie in (0, {omega_max:e})"));
    }
    let b_min = b_sigma_min(sigma);
    let at_limit = |btm| OmegaDecision {
        omega_opt: omega_limit,
        branch: DivergenceBranch::AtLimit,
        omega_btm: btm,
        b_sigma_min: b_min,
    };
    if b <= b_min {
        return Ok(at_limit(None));
    }
    let btm = omega_btm(b, sigma, BtmMethod::Root)?;
    let limit_wins = if omega_limit < omega_at_b_sigma_min(sigma) {
        let a = coverage_radius(omega_limit, b, sigma)?;
        b < b_sigma(w_of_a(a, sigma)?, sigma)
    } else {
        b < b_sigma(omega_limit, sigma)
    };
    if limit_wins {
        Ok(at_limit(Some(btm)))
    } else {
        Ok(OmegaDecision { omega_opt: btm, branch: DivergenceBranch::AtBtm, omega_btm: Some(btm), b_sigma_min: b_min })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FouMethod {
    Root,
    Fit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FouDecision {
    pub eta_opt: f64,
    pub u_opt: f64,
    /// Normalized reset time `T̂_a`.
    pub t_hat_a: f64,
    pub method: FouMethod,
}

/// `T̂_a = v·d·T_a / (2πκ²(1 − P_R))`.
pub fn normalized_reset_time(scan: &ScanParams, chain: &ProbabilityChain) -> f64 {
    scan.reset_time / (scan.time_scale() * (1.0 - chain.p_r))
}

/// Positive root of `e^η − η − 1 = t`.
pub fn eta_root(t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return domain("eta_root", format!("T_hat_a must be positive and finite, got {t}"));
    }
    let f = |eta: f64| eta.exp_m1() - eta - t;
    // e^η − η − 1 ≥ η²/2, so η ≤ sqrt(2t); and for large t, η ≤ ln(t+1)+1 suffices
    let hi = (2.0 * t).sqrt().min((t + 1.0).ln() + 1.0).max(1e-300);
    let mut eta = bisect(f, 0.0, hi * 1.000_001, 1e-14, 400)?;
    // Newton polish: f' = e^η − 1 > 0
    for _ in 0..3 {
        let d = eta.exp_m1();
        if d <= 0.0 {
            break;
        }
        let step = f(eta) / d;
        eta -= step;
    }
    Ok(eta)
}

/// Piecewise quadratic fit for `η_opt` in `x = ln T̂_a`, valid for `T̂_a ∈ [0.01, 10]`.
pub fn eta_fit(t: f64) -> Result<f64> {
    if !(0.01..=10.0).contains(&t) {
        return domain("eta_fit", format!("T_hat_a = {t} outside the fitted range [0.01, 10]"));
    }
    let x = t.ln();
    let (c2, c1, c0) = if t < 0.1 {
        (0.02824, 0.3137, 0.9873)
    } else if t <= 1.0 {
        (0.06114, 0.4549, 1.1445)
    } else {
        (0.07171, 0.4725, 1.1441)
    };
    Ok(c2 * x * x + c1 * x + c0)
}

/// FOU radius minimizing the expected multi-scan time.
pub fn optimal_fou(scan: &ScanParams, chain: &ProbabilityChain, method: FouMethod) -> Result<FouDecision> {
    if !(chain.p_r > 0.0 && chain.p_r < 1.0) {
        return domain("optimal_fou", format!("P_R must lie in (0, 1), got {}", chain.p_r));
    }
    let t_hat_a = normalized_reset_time(scan, chain);
    let eta_opt = match method {
        FouMethod::Root => eta_root(t_hat_a)?,
        FouMethod::Fit => eta_fit(t_hat_a)?,
    };
    Ok(FouDecision { eta_opt, u_opt: scan.pointing_std * (2.0 * eta_opt).sqrt(), t_hat_a, method })
}

/// Minimum expected time at the optimal FOU.
pub fn min_time_at_fou(scan: &ScanParams, chain: &ProbabilityChain, fou: &FouDecision) -> f64 {
    let inv = 1.0 / chain.p_r;
    let scan_u = std::f64::consts::PI * fou.u_opt * fou.u_opt / (scan.speed * scan.pitch);
    inv * scan.time_scale() + (inv - 1.0) * (scan_u + scan.reset_time)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VibrationDecision {
    /// Jitter std minimizing the expected time at `ω_limit`, if one exists.
    pub sigma_opt: Option<f64>,
    /// Smallest divergence worth building for the design jitter `σ`.
    pub omega_sigma_limit: f64,
}

/// Effect of platform vibration at a fixed divergence `omega_limit`.
pub fn vibration_analysis(b: f64, omega_limit: f64, sigma: f64) -> Result<VibrationDecision> {
    if !(b > 0.0) {
        return domain("vibration_analysis", format!("B must be > 0, got {b}"));
    }
    let bound = b.sqrt() * (-0.25f64).exp();
    let sigma_opt = if omega_limit <= bound {
        let disc = b * b - E * omega_limit.powi(4);
        if disc < 0.0 {
            return domain("vibration_analysis", "B² < e·ω⁴");
        }
        Some(disc.sqrt() / (2.0 * (2.0 * E).sqrt() * omega_limit))
    } else {
        None
    };
    Ok(VibrationDecision { sigma_opt, omega_sigma_limit: omega_sigma_limit(b, sigma) })
}

/// `sqrt( sqrt(B²/e + 16σ⁴) − 4σ² )`.
pub fn omega_sigma_limit(b: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    ((b * b / E + 16.0 * s2 * s2).sqrt() - 4.0 * s2).sqrt()
}
