//! `satnr` command-line front end.
//!
//! Every subcommand produces an [`Output`]: text sections for humans and one
//! CSV table for machines. `sweep` reruns any subcommand over a Cartesian
//! grid of its scalar inputs.

pub mod commands;
pub mod sweep;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use satnr_core::report::{ReportDocument, Section, Table};
use satnr_core::scenario::{load_scenario, ScenarioConfig};

pub use commands::Output;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success (infeasible verdicts included), 1 I/O, 2 usage, 3 config.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

impl From<satnr_core::Error> for CliError {
    fn from(e: satnr_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "satnr", version, about = "NR over LEO satellite backhaul: feasibility analysis and HARQ simulation")]
pub struct Cli {
    /// Scenario file (flat `key = value`, SI units). Defaults apply when omitted.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Delay budget, satellite and UE Doppler over an elevation grid.
    Impairments(commands::ImpairmentsArgs),
    /// Residual Doppler over the elevation x position-error grid.
    DopplerSurface(commands::SurfaceArgs),
    /// Subcarrier spacings with their Doppler and position-error limits.
    Numerology(commands::NumerologyArgs),
    /// UE random access and relay attach timing verdicts.
    RaCheck(commands::RaArgs),
    /// HARQ process count, soft buffer and DCI field width.
    HarqDim(commands::HarqDimArgs),
    /// Discrete-event HARQ simulation.
    HarqSim(commands::HarqSimArgs),
    /// Every analysis in one plain-text report.
    Report(commands::ReportArgs),
    /// Cartesian sweep of another subcommand's scalar inputs.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// `name=v1,v2,...` or `name=start:stop:step`. Scenario keys override the
    /// scenario; other names are passed to the subcommand as `--name value`.
    #[arg(long = "vary", required = true)]
    pub vary: Vec<String>,

    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,

    /// Subcommand and its fixed arguments.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
    pub command: Vec<String>,
}

pub fn read_scenario(path: Option<&Path>) -> Result<ScenarioConfig, CliError> {
    match path {
        None => Ok(ScenarioConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            load_scenario(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
    }
}

/// Runs one non-sweep subcommand against a scenario.
pub fn execute(command: &Command, scenario: &ScenarioConfig) -> Result<Output, CliError> {
    match command {
        Command::Impairments(a) => commands::impairments(scenario, a),
        Command::DopplerSurface(a) => commands::doppler_surface(scenario, a),
        Command::Numerology(a) => commands::numerology(scenario, a),
        Command::RaCheck(a) => commands::ra_check(scenario, a),
        Command::HarqDim(a) => commands::harq_dim(scenario, a),
        Command::HarqSim(a) => commands::harq_sim(scenario, a),
        Command::Report(a) => commands::report(scenario, a),
        Command::Sweep(a) => {
            let table = sweep::run(scenario, a)?;
            Ok(Output {
                sections: vec![Section::new("sweep").with_table(table.clone())],
                table,
            })
        }
    }
}

pub fn render(output: &Output, scenario: &ScenarioConfig, format: Format) -> String {
    match format {
        Format::Csv => output.table.to_csv(),
        Format::Text => ReportDocument {
            scenario: *scenario,
            sections: output.sections.clone(),
        }
        .render(),
    }
}

/// Parses `args` and runs them, writing to `--out` or `stdout`.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                stdout.write_all(e.render().to_string().as_bytes())?;
                return Ok(());
            }
            _ => return Err(CliError::Usage(e.render().to_string())),
        },
    };
    let scenario = read_scenario(cli.scenario.as_deref())?;
    let output = execute(&cli.command, &scenario)?;
    let format = match cli.command {
        Command::Sweep(_) => Format::Csv,
        _ => cli.format,
    };
    let text = render(&output, &scenario, format);
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub(crate) fn table_section(title: &str, table: &Table) -> Section {
    Section::new(title).with_table(table.clone())
}
