//! `toricsym`: checks, orbit listings, equivariant MMP traces, census
//! enumeration and the acceptance suite, over files of integer fan data.

pub mod error;
pub mod io;
pub mod report;
pub mod verify;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use toric_core::{make_family_fan, EnumerationParams, FamilySpec, Lattice};

pub use error::CliError;
use io::{load_action, load_fan, load_galois, FanDocument};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "toricsym", version, about = "Symmetric toric varieties: exact checks and census")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flags, class group, ray blocks, relations, and action invariants.
    Check { fan: PathBuf, action: Option<PathBuf> },
    /// Ray orbits of an action.
    Orbits { fan: PathBuf, action: PathBuf },
    /// Equivariant MMP on a smooth complete surface.
    Mmp {
        fan: PathBuf,
        action: PathBuf,
        #[arg(long)]
        explore_all: bool,
        /// Galois involution file (`tau = [[..], [..]]`), added to the group.
        #[arg(long)]
        galois: Option<PathBuf>,
    },
    /// Invariant surface fans from S3-orbits of small vectors.
    Enumerate {
        #[arg(long, default_value = "weightA2")]
        lattice: String,
        #[arg(long, default_value_t = 2)]
        height: i64,
        #[arg(long, default_value_t = 12)]
        max_rays: usize,
        #[arg(long)]
        smooth: bool,
        #[arg(long)]
        negation: bool,
    },
    /// Named families.
    #[command(subcommand)]
    Families(FamiliesCommand),
    /// Runs the acceptance suite.
    VerifyPaper {
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FamiliesCommand {
    List,
    /// Writes a family member as a fan file.
    Emit {
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Text for stdout plus the exit code.
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn render<T: Serialize + std::fmt::Display>(format: Format, value: &T) -> String {
    match format {
        Format::Plain => value.to_string(),
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(value).expect("serializable report");
            s.push('\n');
            s
        }
    }
}

/// How a failure is shown on stdout in machine mode and on stderr otherwise.
pub fn render_error(format: Format, err: &CliError) -> String {
    match format {
        Format::Plain => format!("error: {err}\n"),
        Format::Machine => format!(
            "{}\n",
            json!({ "error": err.reason(), "exit_code": err.exit_code(), "message": err.to_string() })
        ),
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let f = cli.format;
    let ok = |text: String| Ok(Output { text, code: 0 });
    match &cli.command {
        Command::Check { fan, action } => {
            let fan_value = load_fan(fan)?;
            let action = action.as_ref().map(|p| load_action(p, &fan_value)).transpose()?;
            ok(render(f, &report::run_check(&fan_value, action.as_ref())?))
        }
        Command::Orbits { fan, action } => {
            let fan_value = load_fan(fan)?;
            let action = load_action(action, &fan_value)?;
            ok(render(f, &report::run_orbits(&fan_value, &action)?))
        }
        Command::Mmp {
            fan,
            action,
            explore_all,
            galois,
        } => {
            let fan_value = load_fan(fan)?;
            let action = load_action(action, &fan_value)?;
            let galois = galois.as_ref().map(|p| load_galois(p, &fan_value)).transpose()?;
            ok(render(
                f,
                &report::run_mmp(&fan_value, &action, galois.as_ref(), *explore_all)?,
            ))
        }
        Command::Enumerate {
            lattice,
            height,
            max_rays,
            smooth,
            negation,
        } => {
            let lattice: Lattice = lattice
                .parse()
                .map_err(|e: toric_core::FanError| CliError::Parse(e.to_string()))?;
            ok(render(
                f,
                &report::run_enumerate(EnumerationParams {
                    lattice,
                    height: *height,
                    max_rays: *max_rays,
                    require_smooth: *smooth,
                    include_negation: *negation,
                })?,
            ))
        }
        Command::Families(FamiliesCommand::List) => {
            let entries = FamilySpec::catalogue();
            ok(match f {
                Format::Plain => entries
                    .iter()
                    .map(|(syntax, about)| format!("{syntax:<18} {about}\n"))
                    .collect(),
                Format::Machine => format!(
                    "{}\n",
                    serde_json::to_string_pretty(
                        &entries
                            .iter()
                            .map(|(s, a)| json!({ "syntax": s, "description": a }))
                            .collect::<Vec<_>>()
                    )
                    .expect("serializable")
                ),
            })
        }
        Command::Families(FamiliesCommand::Emit { spec, out }) => {
            let spec: FamilySpec = spec.parse().map_err(|e| CliError::Parse(format!("{e}")))?;
            let built = make_family_fan(spec)
                .map_err(|e| CliError::precondition("invalid-parameter", e.to_string()))?;
            let text = FanDocument::from_fan(&built.fan).render();
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(|e| {
                        CliError::precondition("io", format!("{}: {e}", path.display()))
                    })?;
                    ok(String::new())
                }
                None => ok(text),
            }
        }
        Command::VerifyPaper { only } => {
            let outcomes = verify::run(&verify::Harness::default(), only.as_deref())
                .ok_or_else(|| CliError::Parse(format!("unknown criterion {}", only.as_deref().unwrap_or(""))))?;
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let text = match f {
                Format::Plain => {
                    let mut s: String = outcomes.iter().map(|o| format!("{o}\n")).collect();
                    s.push_str(&format!("{} passed, {failed} failed\n", outcomes.len() - failed));
                    s
                }
                Format::Machine => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({ "criteria": outcomes, "failed": failed }))
                        .expect("serializable")
                ),
            };
            Ok(Output {
                text,
                code: if failed == 0 { 0 } else { CliError::Verification { failed }.exit_code() },
            })
        }
    }
}
