//! Scenario-file driven front end for the `acqtime` model: evaluation,
//! optimization, Monte Carlo, CSV sweeps and a self-validation suite.

pub mod commands;
pub mod error;
pub mod scenario;
pub mod sweep;

pub use error::CliError;
pub use scenario::ScenarioFile;
