//! Command-line grammar. Values are collected as raw strings and handed to
//! [`Settings`] so that flags and config-file entries go through the same
//! parsing and validation.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{Command, Settings};

#[derive(Debug, Parser)]
#[command(name = "qleak", version, about = "Leakage and fidelity loss of a Josephson charge qubit")]
pub struct Cli {
    /// Plain `key=value` file; command-line flags override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Fidelity at E_J/E_ch = 0.02, 0.01, 0.005 with oracle columns.
    Table(TableArgs),
    /// One reconciliation row per ratio.
    Sweep(SweepArgs),
    /// Mathieu characteristic value from the solver and the series.
    Mathieu(MathieuArgs),
    /// Exact charge-basis leakage.
    Oracle(OracleArgs),
    /// Ideal against real evolution of cos θ|0⟩ + sin θ|1⟩.
    Evolve(EvolveArgs),
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// eq16, numeric or pert.
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long, value_name = "N")]
    pub truncation: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "R")]
    pub lo: Option<String>,
    #[arg(long, value_name = "R")]
    pub hi: Option<String>,
    #[arg(long, value_name = "K")]
    pub steps: Option<String>,
    /// geometric (default) or linear.
    #[arg(long)]
    pub spacing: Option<String>,
    #[arg(long, value_name = "N")]
    pub truncation: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MathieuArgs {
    /// ce or se.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, value_name = "R")]
    pub order: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Starting number of Fourier modes.
    #[arg(long, value_name = "M")]
    pub truncation: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_name = "R")]
    pub ratio: Option<String>,
    #[arg(long, value_name = "N")]
    pub truncation: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// In units of 1/E_ch.
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<String>,
    #[arg(long, value_name = "R")]
    pub ratio: Option<String>,
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long, value_name = "N")]
    pub truncation: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

impl CliCommand {
    /// The command and the settings given as flags.
    pub fn to_settings(&self) -> (Command, Settings) {
        let mut s = Settings::new();
        let mut put = |key: &str, v: &Option<String>| {
            if let Some(v) = v {
                s.set(key, v.as_str());
            }
        };
        let (command, common) = match self {
            CliCommand::Table(a) => {
                put("convention", &a.convention);
                put("truncation", &a.truncation);
                (Command::Table, &a.common)
            }
            CliCommand::Sweep(a) => {
                put("lo", &a.lo);
                put("hi", &a.hi);
                put("steps", &a.steps);
                put("spacing", &a.spacing);
                put("truncation", &a.truncation);
                (Command::Sweep, &a.common)
            }
            CliCommand::Mathieu(a) => {
                put("kind", &a.kind);
                put("order", &a.order);
                put("q", &a.q);
                put("truncation", &a.truncation);
                (Command::Mathieu, &a.common)
            }
            CliCommand::Oracle(a) => {
                put("ratio", &a.ratio);
                put("truncation", &a.truncation);
                (Command::Oracle, &a.common)
            }
            CliCommand::Evolve(a) => {
                put("theta", &a.theta);
                put("time", &a.time);
                put("ratio", &a.ratio);
                put("convention", &a.convention);
                put("truncation", &a.truncation);
                (Command::Evolve, &a.common)
            }
        };
        put("format", &common.format);
        put("out", &common.out);
        (command, s)
    }
}
