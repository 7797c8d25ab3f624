//! A complete acquisition scenario and its end-to-end evaluation.

use crate::error::Result;
use crate::link_budget::{
    coverage_radius, link_constant, max_divergence, LinkParams, TurbulenceParams, VibrationParams,
};
use crate::multiscan::{expected_acquisition_time, MultiScanResult};
use crate::scan_model::{fou_scan_time, probability_chain, single_scan_expected_time, ProbabilityChain, ScanParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub link: LinkParams,
    pub turbulence: TurbulenceParams,
    pub vibration: VibrationParams,
    pub scan: ScanParams,
    /// Smallest divergence the laser can produce, `ω_limit` (rad).
    pub omega_limit: f64,
}

/// Every derived quantity of a scenario, in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub b: f64,
    pub omega_max: f64,
    pub g: f64,
    pub chain: ProbabilityChain,
    pub fou_time: f64,
    pub single_scan_time: f64,
    pub multiscan: MultiScanResult,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        self.turbulence.validate()?;
        self.vibration.validate()?;
        self.scan.validate()
    }

    pub fn link_constant(&self) -> Result<f64> {
        link_constant(&self.link, &self.turbulence)
    }

    pub fn omega_max(&self) -> Result<f64> {
        Ok(max_divergence(self.link_constant()?, self.vibration.sigma))
    }

    pub fn coverage_radius(&self) -> Result<f64> {
        coverage_radius(self.scan.omega, self.link_constant()?, self.vibration.sigma)
    }

    pub fn chain(&self) -> Result<ProbabilityChain> {
        probability_chain(&self.scan, self.coverage_radius()?)
    }

    pub fn expected_time(&self) -> Result<f64> {
        Ok(expected_acquisition_time(&self.scan, &self.chain()?)?.expected_time)
    }

    pub fn evaluate(&self) -> Result<Evaluation> {
        self.validate()?;
        let b = self.link_constant()?;
        let g = coverage_radius(self.scan.omega, b, self.vibration.sigma)?;
        let chain = probability_chain(&self.scan, g)?;
        Ok(Evaluation {
            b,
            omega_max: max_divergence(b, self.vibration.sigma),
            g,
            chain,
            fou_time: fou_scan_time(&self.scan),
            single_scan_time: single_scan_expected_time(&self.scan),
            multiscan: expected_acquisition_time(&self.scan, &chain)?,
        })
    }

    pub fn with_pitch(mut self, pitch: f64) -> Self {
        self.scan.pitch = pitch;
        self
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.scan.omega = omega;
        self
    }

    pub fn with_fou(mut self, fou: f64) -> Self {
        self.scan.fou = fou;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.vibration.sigma = sigma;
        self
    }
}
