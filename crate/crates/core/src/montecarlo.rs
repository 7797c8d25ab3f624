//! Monte Carlo oracle for the acquisition model.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, trial)`, so
//! reports are bit-identical whether trials run serially or on many threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::link_budget::{
    pointing_gain, pointing_gain_second_moment, turbulence_second_moment, LinkParams, TurbulenceParams, VibrationParams,
};
use crate::model::Scenario;
use crate::numerics::pairwise_sum;
use crate::scan_model::{fou_scan_time, single_scan_time, ReceiverDraw, ScanParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum McMode {
    /// Coverage decided by the coverage radius against the radial arm distance.
    #[default]
    Geometric,
    /// Coverage decided by averaging sampled instantaneous SNR (jitter + fading) over the dwell.
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMetric {
    #[default]
    Radial,
    /// True distance to the spiral curve; diagnostic only.
    Curve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub mode: McMode,
    pub max_scans: u64,
    pub metric: DistanceMetric,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { trials: 100_000, seed: 1, mode: McMode::Geometric, max_scans: 100_000, metric: DistanceMetric::Radial }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McReport {
    pub success_rate: f64,
    pub mean_time: f64,
    /// Normal-approximation 95% half-width of `mean_time`.
    pub ci95_halfwidth: f64,
    pub per_scan_success_rate: f64,
    pub trials: u64,
    pub total_scans: u64,
}

impl McReport {
    /// Standard error of the per-scan success rate against probability `p`.
    pub fn per_scan_standard_error(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.total_scans as f64).sqrt()
    }
}

/// RNG for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws a receiver position: Rayleigh radius, uniform angle.
pub fn sample_receiver<R: Rng + ?Sized>(rng: &mut R, kappa: f64) -> ReceiverDraw {
    let u: f64 = rng.random();
    let rho = kappa * (-2.0 * (-u).ln_1p()).sqrt();
    let theta = 2.0 * PI * rng.random::<f64>();
    ReceiverDraw { rho, theta }
}

fn gamma_gamma<R: Rng + ?Sized>(rng: &mut R, large: &Gamma<f64>, small: &Gamma<f64>, gamma: f64) -> f64 {
    gamma * large.sample(rng) * small.sample(rng)
}

fn unit_gammas(turb: &TurbulenceParams) -> Result<(Gamma<f64>, Gamma<f64>)> {
    let mk = |shape: f64| {
        Gamma::new(shape, 1.0 / shape).map_err(|e| Error::Domain { op: "gamma_gamma", reason: e.to_string() })
    };
    Ok((mk(turb.alpha)?, mk(turb.beta)?))
}

struct PhysicalLink {
    link: LinkParams,
    vibration: VibrationParams,
    large: Gamma<f64>,
    small: Gamma<f64>,
    gamma: f64,
    samples_per_dwell: usize,
}

impl PhysicalLink {
    fn new(sc: &Scenario) -> Result<Self> {
        let (large, small) = unit_gammas(&sc.turbulence)?;
        // beam crossing time ω/v sampled at the vibration rate
        let dwell = sc.scan.omega / sc.scan.speed;
        let samples_per_dwell = ((sc.vibration.freq * dwell).round() as usize).max(1);
        Ok(Self { link: sc.link, vibration: sc.vibration, large, small, gamma: sc.turbulence.gamma, samples_per_dwell })
    }

    fn covered<R: Rng + ?Sized>(&self, rng: &mut R, offset: f64, omega: f64) -> bool {
        let s = self.vibration.sigma;
        let amp = self.link.power * self.link.responsivity;
        let mut snr = 0.0;
        for _ in 0..self.samples_per_dwell {
            let nx: f64 = rng.sample(StandardNormal);
            let ny: f64 = rng.sample(StandardNormal);
            let phi = (offset + s * nx).hypot(s * ny);
            let ht = pointing_gain(phi, omega, &self.link).expect("omega validated");
            let hc = gamma_gamma(rng, &self.large, &self.small, self.gamma);
            snr += (amp * ht * hc).powi(2) / self.link.noise_power();
        }
        snr / self.samples_per_dwell as f64 >= self.link.snr_threshold_linear()
    }
}

struct Trial {
    time: f64,
    scans: u64,
}

fn run_trial(scan: &ScanParams, g: f64, cfg: &McConfig, physical: Option<&PhysicalLink>, trial: u64) -> Result<Trial> {
    let mut rng = substream(cfg.seed, trial);
    let t_fail = fou_scan_time(scan) + scan.reset_time;
    let mut elapsed = 0.0;
    for scans in 1..=cfg.max_scans {
        let draw = sample_receiver(&mut rng, scan.pointing_std);
        let field_ok = rng.random::<f64>() < scan.field_prob;
        if draw.rho <= scan.fou {
            let dist = match cfg.metric {
                DistanceMetric::Radial => draw.radial_arm_distance(scan.pitch),
                DistanceMetric::Curve => draw.curve_distance(scan.pitch),
            };
            let covered = match physical {
                None => dist <= g,
                Some(p) => p.covered(&mut rng, dist, scan.omega),
            };
            if covered && field_ok {
                return Ok(Trial { time: elapsed + single_scan_time(draw.rho, scan), scans });
            }
        }
        elapsed += t_fail;
    }
    Err(Error::CapExceeded { trial, max_scans: cfg.max_scans })
}

/// Simulates `cfg.trials` multi-scan acquisitions of `scenario`.
pub fn run_mc(scenario: &Scenario, cfg: &McConfig) -> Result<McReport> {
    scenario.validate()?;
    if cfg.trials == 0 || cfg.max_scans == 0 {
        return domain("run_mc", "trials and max_scans must be >= 1");
    }
    let g = scenario.coverage_radius()?;
    let physical = match cfg.mode {
        McMode::Geometric => None,
        McMode::Physical => Some(PhysicalLink::new(scenario)?),
    };
    let scan = scenario.scan;
    let results: Vec<Result<Trial>> =
        (0..cfg.trials).into_par_iter().map(|i| run_trial(&scan, g, cfg, physical.as_ref(), i)).collect();
    let mut times = Vec::with_capacity(results.len());
    let mut total_scans = 0u64;
    for r in results {
        let t = r?;
        times.push(t.time);
        total_scans += t.scans;
    }
    let n = times.len() as f64;
    let mean = pairwise_sum(&times) / n;
    let sq: Vec<f64> = times.iter().map(|t| (t - mean).powi(2)).collect();
    let var = if times.len() > 1 { pairwise_sum(&sq) / (n - 1.0) } else { 0.0 };
    Ok(McReport {
        success_rate: n / cfg.trials as f64,
        mean_time: mean,
        ci95_halfwidth: 1.96 * (var / n).sqrt(),
        per_scan_success_rate: n / total_scans as f64,
        trials: cfg.trials,
        total_scans,
    })
}

const CHUNK: u64 = 1 << 16;

fn chunked<T: Send, F>(samples: u64, seed: u64, f: F) -> Vec<T>
where
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = substream(seed, c);
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect::<Vec<_>>()
        })
        .collect()
}

/// Coverage factors `τ̂ = distance-to-nearest-arm / d` for `samples` receiver draws.
pub fn sample_coverage_factors(samples: u64, pitch: f64, kappa: f64, seed: u64) -> Vec<f64> {
    chunked(samples, seed, |rng| sample_receiver(rng, kappa).radial_arm_distance(pitch) / pitch)
}

/// Single-scan times `πρ²/(vd)` for `samples` receiver draws with an unbounded FOU.
pub fn sample_single_scan_times(samples: u64, scan: &ScanParams, seed: u64) -> Vec<f64> {
    chunked(samples, seed, |rng| single_scan_time(sample_receiver(rng, scan.pointing_std).rho, scan))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub samples: u64,
    pub gain_second_moment_sampled: f64,
    pub gain_second_moment_closed: f64,
    pub fade_second_moment_sampled: f64,
    pub fade_second_moment_closed: f64,
}

impl MomentReport {
    pub fn gain_rel_error(&self) -> f64 {
        (self.gain_second_moment_sampled - self.gain_second_moment_closed).abs() / self.gain_second_moment_closed
    }

    pub fn fade_rel_error(&self) -> f64 {
        (self.fade_second_moment_sampled - self.fade_second_moment_closed).abs() / self.fade_second_moment_closed
    }
}

/// Sampled `E[h_t²]` (jittered pointing about `mean_offset`) and `E[h_c²]`
/// (Gamma-Gamma fade) against their closed forms.
pub fn validate_moments(
    link: &LinkParams,
    turb: &TurbulenceParams,
    vib: &VibrationParams,
    omega: f64,
    mean_offset: f64,
    samples: u64,
    seed: u64,
) -> Result<MomentReport> {
    link.validate()?;
    vib.validate()?;
    if samples == 0 {
        return domain("validate_moments", "samples must be >= 1");
    }
    let (large, small) = unit_gammas(turb)?;
    let s = vib.sigma;
    let gains = chunked(samples, seed, |rng| {
        let phi = if s > 0.0 {
            let nx: f64 = rng.sample(StandardNormal);
            let ny: f64 = rng.sample(StandardNormal);
            (mean_offset + s * nx).hypot(s * ny)
        } else {
            mean_offset
        };
        pointing_gain(phi, omega, link).map(|h| h * h).unwrap_or(f64::NAN)
    });
    let fades =
        chunked(samples, seed ^ 0x9e37_79b9_7f4a_7c15, |rng| gamma_gamma(rng, &large, &small, turb.gamma).powi(2));
    let n = samples as f64;
    Ok(MomentReport {
        samples,
        gain_second_moment_sampled: pairwise_sum(&gains) / n,
        gain_second_moment_closed: pointing_gain_second_moment(omega, mean_offset, s, link)?,
        fade_second_moment_sampled: pairwise_sum(&fades) / n,
        fade_second_moment_closed: turbulence_second_moment(turb)?,
    })
}
