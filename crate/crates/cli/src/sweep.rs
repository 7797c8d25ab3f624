//! One-dimensional parameter sweeps written as CSV.

use std::io::Write;

use acqtime::{run_mc, McConfig};
use rayon::prelude::*;

use crate::error::CliError;
use crate::scenario::ScenarioFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// Spiral pitch, µrad.
    Pitch,
    /// Divergence, µrad.
    Omega,
    /// FOU radius in units of κ.
    Fou,
    /// Jitter std, µrad.
    Sigma,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Pitch => "pitch",
            SweepVar::Omega => "omega",
            SweepVar::Fou => "fou",
            SweepVar::Sigma => "sigma",
        }
    }

    fn apply(self, file: &mut ScenarioFile, value: f64) {
        match self {
            SweepVar::Pitch => file.set("pitch_d_urad", value),
            SweepVar::Omega => file.set("omega_urad", value),
            SweepVar::Sigma => file.set("sigma_urad", value),
            SweepVar::Fou => {
                let kappa = file.get("kappa_mrad").expect("required key");
                file.set("fou_u_mrad", value * kappa)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Adds Monte Carlo columns when set.
    pub mc_trials: Option<u64>,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(CliError::Parse(format!(
                "sweep bounds must satisfy from < to, got {} .. {}",
                self.from, self.to
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Parse(format!("sweep needs at least 2 steps, got {}", self.steps)));
        }
        if self.mc_trials == Some(0) {
            return Err(CliError::Parse("--trials must be >= 1".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.to } else { self.from + i as f64 * h }).collect()
    }
}

struct Row {
    value: f64,
    cells: Vec<f64>,
    warnings: Vec<String>,
}

fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        x.to_string()
    }
}

fn row(file: &ScenarioFile, spec: &SweepSpec, value: f64) -> Row {
    let mut f = file.clone();
    spec.var.apply(&mut f, value);
    let sc = f.to_model();
    let mut warnings = Vec::new();
    let mut cells = match sc.evaluate() {
        Ok(e) => vec![e.multiscan.expected_time, e.chain.p_s, e.chain.tau, e.g * 1e6],
        Err(err) => {
            warnings.push(format!("{}={}: {err}", spec.var.name(), value));
            vec![f64::NAN; 4]
        }
    };
    if let Some(trials) = spec.mc_trials {
        if warnings.is_empty() {
            let cfg = McConfig { trials, seed: spec.seed, ..McConfig::default() };
            match run_mc(&sc, &cfg) {
                Ok(r) => cells.extend([r.mean_time, r.ci95_halfwidth]),
                Err(err) => {
                    warnings.push(format!("{}={} (monte carlo): {err}", spec.var.name(), value));
                    cells.extend([f64::NAN; 2]);
                }
            }
        } else {
            cells.extend([f64::NAN; 2]);
        }
    }
    Row { value, cells, warnings }
}

/// Writes the sweep CSV to `out`. Grid points outside the model domain get
/// `nan` cells and a warning on `err`; the call then returns a domain error
/// after the whole file is written.
pub fn run_sweep(
    file: &ScenarioFile,
    spec: &SweepSpec,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    spec.validate()?;
    let rows: Vec<Row> = spec.values().into_par_iter().map(|v| row(file, spec, v)).collect();

    let mut header = String::from("var,value,T_M_analytic_s,P_S,tau,g_urad");
    if spec.mc_trials.is_some() {
        header.push_str(",T_M_mc_s,mc_ci95_s");
    }
    writeln!(out, "{header}")?;
    let mut bad = 0;
    for r in &rows {
        let cells: Vec<String> = r.cells.iter().map(|&c| fmt(c)).collect();
        writeln!(out, "{},{},{}", spec.var.name(), fmt(r.value), cells.join(","))?;
        for w in &r.warnings {
            writeln!(err, "warning: {w}")?;
        }
        bad += usize::from(!r.warnings.is_empty());
    }
    out.flush()?;
    if bad > 0 {
        return Err(acqtime::Error::Domain {
            op: "sweep",
            reason: format!("{bad} of {} grid points are outside the model domain", rows.len()),
        }
        .into());
    }
    Ok(())
}
