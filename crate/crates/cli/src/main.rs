use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acqtime::montecarlo::McMode;
use acqtime::McConfig;
use acqtime_cli::commands::{cmd_eval, cmd_mc, cmd_optimize, cmd_validate, Target};
use acqtime_cli::scenario::REFERENCE;
use acqtime_cli::sweep::{run_sweep, SweepSpec, SweepVar};
use acqtime_cli::{CliError, ScenarioFile};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Multi-scan acquisition time of a beaconless optical link.
///
/// Exit codes: 0 ok, 1 validation failure, 2 parse error, 3 domain error.
#[derive(Parser)]
#[command(name = "acqtime", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario file; the built-in reference scenario when omitted.
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print link budget, probabilities and expected times.
    Eval {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Print the scenario in canonical form instead of evaluating it.
        #[arg(long)]
        dump_scenario: bool,
        /// Write to this file instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Optimize one design parameter.
    Optimize {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(value_enum)]
        target: TargetArg,
    },
    /// Sweep one parameter and write CSV.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// pitch, omega and sigma in µrad; fou in units of κ.
        #[arg(long, value_enum)]
        var: VarArg,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Add Monte Carlo columns with this many trials per row.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Monte Carlo simulation of the multi-scan acquisition.
    Mc {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Geometric)]
        mode: ModeArg,
    },
    /// Run the self-consistency checks.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Pitch,
    Omega,
    Fou,
    Vibration,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarArg {
    Pitch,
    Omega,
    Fou,
    Sigma,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Geometric,
    Physical,
}

fn load(arg: &ScenarioArg) -> Result<ScenarioFile, CliError> {
    match &arg.scenario {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", p.display())))?;
            ScenarioFile::parse(&text).map_err(|e| match e {
                CliError::Parse(m) => CliError::Parse(format!("{}: {m}", p.display())),
                other => other,
            })
        }
        None => ScenarioFile::parse(REFERENCE),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Eval { scenario, dump_scenario, out } => {
            let file = load(&scenario)?;
            drop(stdout);
            let mut w = sink(out.as_deref())?;
            if dump_scenario {
                write!(w, "{}", file.dump())?;
            } else {
                cmd_eval(&file, &mut w)?;
            }
            w.flush()?;
        }
        Command::Optimize { scenario, target } => {
            let target = match target {
                TargetArg::Pitch => Target::Pitch,
                TargetArg::Omega => Target::Omega,
                TargetArg::Fou => Target::Fou,
                TargetArg::Vibration => Target::Vibration,
            };
            cmd_optimize(&load(&scenario)?, target, &mut stdout)?;
        }
        Command::Sweep { scenario, var, from, to, steps, trials, seed, out } => {
            let file = load(&scenario)?;
            let var = match var {
                VarArg::Pitch => SweepVar::Pitch,
                VarArg::Omega => SweepVar::Omega,
                VarArg::Fou => SweepVar::Fou,
                VarArg::Sigma => SweepVar::Sigma,
            };
            let spec = SweepSpec { var, from, to, steps, mc_trials: trials, seed };
            drop(stdout);
            let mut w = sink(out.as_deref())?;
            let r = run_sweep(&file, &spec, &mut w, &mut io::stderr().lock());
            w.flush()?;
            r?;
        }
        Command::Mc { scenario, trials, seed, mode } => {
            let mode = if mode == ModeArg::Physical { McMode::Physical } else { McMode::Geometric };
            let cfg = McConfig { trials, seed, mode, ..McConfig::default() };
            cmd_mc(&load(&scenario)?, &cfg, &mut stdout)?;
        }
        Command::Validate { scenario, trials, seed } => {
            cmd_validate(&load(&scenario)?, trials, seed, &mut stdout)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
