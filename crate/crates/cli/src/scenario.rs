//! Scenario files: flat `key = value` lines, `#` comments, units in the key name.
//!
//! Values are kept in file units so a dumped scenario re-parses to exactly
//! the same numbers; conversion to SI happens once in [`ScenarioFile::to_model`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use acqtime::link_budget::{LinkParams, TurbulenceParams, VibrationParams};
use acqtime::presets;
use acqtime::scan_model::ScanParams;
use acqtime::Scenario;

use crate::error::CliError;

/// Keys in canonical dump order, excluding the turbulence keys.
const NUMERIC_KEYS: [&str; 19] = [
    "distance_km",
    "loss_tx",
    "loss_rx",
    "split_ratio",
    "aperture_cm",
    "responsivity_a_w",
    "noise_na",
    "snr_db",
    "power_pt_mw",
    "sigma_urad",
    "vib_freq_hz",
    "omega_urad",
    "omega_limit_urad",
    "pitch_d_urad",
    "fou_u_mrad",
    "speed_v_mrad_s",
    "reset_s",
    "p_v",
    "kappa_mrad",
];

const OPTIONAL_KEYS: [&str; 1] = ["omega_limit_urad"];
const TURB_KEYS: [&str; 3] = ["gamma", "alpha", "beta"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Turbulence {
    /// Reference level `1..=5`.
    Preset(usize),
    Explicit {
        gamma: f64,
        alpha: f64,
        beta: f64,
    },
}

impl Turbulence {
    pub fn params(&self) -> TurbulenceParams {
        match *self {
            Turbulence::Preset(level) => presets::turbulence(level).expect("level checked at parse time"),
            Turbulence::Explicit { gamma, alpha, beta } => TurbulenceParams { gamma, alpha, beta },
        }
    }
}

/// A parsed scenario in file units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    values: BTreeMap<&'static str, f64>,
    pub turbulence: Turbulence,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values: BTreeMap<&'static str, f64> = BTreeMap::new();
        let mut turb_preset: Option<(usize, usize)> = None;
        let mut turb_explicit: BTreeMap<&'static str, (usize, f64)> = BTreeMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::parse(line_no, None, "expected `key = value`"));
            };
            let (key, value) = (key.trim(), value.trim());
            if key == "turb" {
                if turb_preset.is_some() {
                    return Err(CliError::parse(line_no, Some(key), "duplicate key"));
                }
                let level = value
                    .strip_prefix("turb")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|n| (1..=5).contains(n))
                    .ok_or_else(|| {
                        CliError::parse(line_no, Some(key), format!("unknown preset `{value}`, expected turb1..turb5"))
                    })?;
                turb_preset = Some((line_no, level));
                continue;
            }
            let number = || {
                value
                    .parse::<f64>()
                    .map_err(|_| CliError::parse(line_no, Some(key), format!("`{value}` is not a number")))
            };
            if let Some(&k) = TURB_KEYS.iter().find(|&&k| k == key) {
                if turb_explicit.insert(k, (line_no, number()?)).is_some() {
                    return Err(CliError::parse(line_no, Some(key), "duplicate key"));
                }
                continue;
            }
            let Some(&k) = NUMERIC_KEYS.iter().find(|&&k| k == key) else {
                return Err(CliError::parse(line_no, Some(key), "unknown key"));
            };
            if values.insert(k, number()?).is_some() {
                return Err(CliError::parse(line_no, Some(key), "duplicate key"));
            }
        }

        for key in NUMERIC_KEYS {
            if !OPTIONAL_KEYS.contains(&key) && !values.contains_key(key) {
                return Err(CliError::Parse(format!("missing required key `{key}`")));
            }
        }
        let turbulence = match (turb_preset, turb_explicit.len()) {
            (Some((_, level)), 0) => Turbulence::Preset(level),
            (Some((line, _)), _) => {
                return Err(CliError::parse(line, Some("turb"), "give either `turb` or gamma/alpha/beta, not both"));
            }
            (None, 3) => Turbulence::Explicit {
                gamma: turb_explicit["gamma"].1,
                alpha: turb_explicit["alpha"].1,
                beta: turb_explicit["beta"].1,
            },
            (None, _) => {
                let missing: Vec<&str> = TURB_KEYS.iter().copied().filter(|k| !turb_explicit.contains_key(k)).collect();
                return Err(CliError::Parse(format!(
                    "missing turbulence: set `turb = turbN` or all of gamma/alpha/beta (missing `{}`)",
                    missing.join("`, `")
                )));
            }
        };
        Ok(Self { values, turbulence })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// Overrides a numeric key, e.g. from a sweep.
    pub fn set(&mut self, key: &'static str, value: f64) {
        self.values.insert(key, value);
    }

    fn v(&self, key: &str) -> f64 {
        self.values[key]
    }

    /// Canonical text form; parses back to an identical value.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for key in NUMERIC_KEYS {
            if let Some(v) = self.get(key) {
                writeln!(out, "{key} = {v}").unwrap();
            }
            if key == "power_pt_mw" {
                match self.turbulence {
                    Turbulence::Preset(level) => writeln!(out, "turb = turb{level}").unwrap(),
                    Turbulence::Explicit { gamma, alpha, beta } => {
                        writeln!(out, "gamma = {gamma}\nalpha = {alpha}\nbeta = {beta}").unwrap()
                    }
                }
            }
        }
        out
    }

    /// SI model scenario. `omega_limit` falls back to `omega`.
    pub fn to_model(&self) -> Scenario {
        let omega = self.v("omega_urad") * 1e-6;
        Scenario {
            link: LinkParams {
                distance: self.v("distance_km") * 1e3,
                loss_tx: self.v("loss_tx"),
                loss_rx: self.v("loss_rx"),
                split_ratio: self.v("split_ratio"),
                aperture: self.v("aperture_cm") * 1e-2,
                responsivity: self.v("responsivity_a_w"),
                noise_std: self.v("noise_na") * 1e-9,
                snr_threshold_db: self.v("snr_db"),
                power: self.v("power_pt_mw") * 1e-3,
            },
            turbulence: self.turbulence.params(),
            vibration: VibrationParams { sigma: self.v("sigma_urad") * 1e-6, freq: self.v("vib_freq_hz") },
            scan: ScanParams {
                omega,
                pitch: self.v("pitch_d_urad") * 1e-6,
                fou: self.v("fou_u_mrad") * 1e-3,
                speed: self.v("speed_v_mrad_s") * 1e-3,
                reset_time: self.v("reset_s"),
                field_prob: self.v("p_v"),
                pointing_std: self.v("kappa_mrad") * 1e-3,
            },
            omega_limit: self.get("omega_limit_urad").map_or(omega, |w| w * 1e-6),
        }
    }
}

/// The reference scenario: turbulence level 3, ω = 20 µrad, d = 40 µrad, U = 1.3 mrad.
pub const REFERENCE: &str = "\
# 1200 km LEO-to-ground downlink
distance_km = 1200
loss_tx = 0.92
loss_rx = 0.92
split_ratio = 0.1
aperture_cm = 30
responsivity_a_w = 0.88
noise_na = 9
snr_db = 20
power_pt_mw = 90
turb = turb3
sigma_urad = 4
vib_freq_hz = 100
omega_urad = 20
pitch_d_urad = 40
fou_u_mrad = 1.3
speed_v_mrad_s = 0.4
reset_s = 10
p_v = 0.95
kappa_mrad = 1
";
