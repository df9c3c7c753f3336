//! `finshape` command-line front end.

mod commands;
mod golden;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use finshape::{Error, Guards};

use output::Report;

#[derive(Parser, Debug)]
#[command(name = "finshape", version, about = "Finite spaces, their covers and weak homotopy types")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(clap::Args, Debug, Clone)]
pub struct RunConfig {
    /// Largest poset handed to the isomorphism search.
    #[arg(long, global = true, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
    guard_elements: u32,
    /// Largest space whose open-set lattice may be enumerated.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    guard_opens: u32,
    /// Largest number of faces of any complex built.
    #[arg(long, global = true, default_value_t = 200_000, value_parser = clap::value_parser!(u32).range(1..))]
    guard_faces: u32,
    /// Largest number of maps enumerated by a homotopy search.
    #[arg(long, global = true, default_value_t = 200_000, value_parser = clap::value_parser!(u32).range(1..))]
    guard_maps: u32,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized subcommands; derived and printed when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Let the library use all cores where it can.
    #[arg(long, global = true)]
    parallel: bool,
}

impl RunConfig {
    pub fn guards(&self) -> Guards {
        Guards {
            elements: self.guard_elements as usize,
            opens: self.guard_opens as usize,
            faces: self.guard_faces as usize,
            maps: self.guard_maps as usize,
            ..Guards::default()
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summary of a space: size, components, opens, beat points, core, homology.
    Info { space: PathBuf },
    /// Replays the worked examples against the bundled fixtures.
    PaperExamples {
        /// Read the fixtures from this directory instead of the bundled copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Runs one check; exits 1 when it fails.
    #[command(subcommand)]
    Check(Check),
    /// Writes a derived structure to stdout or a file.
    Export {
        #[arg(value_enum)]
        what: ExportKind,
        /// A space file (a cover file for `nerve`).
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomized property sweep over small random spaces.
    Sweep {
        /// Number of random spaces.
        #[arg(long, default_value_t = 25)]
        count: usize,
        /// Largest number of elements of a random space.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=12))]
        max_elements: u32,
    },
}

#[derive(Subcommand, Debug)]
enum Check {
    /// Is the cover basis-like?
    BasisLike { cover: PathBuf },
    /// Does the first cover refine the second?
    Refines { fine: PathBuf, coarse: PathBuf },
    /// Is there a projection from the first cover to the second?
    LeqC { fine: PathBuf, coarse: PathBuf },
    /// Is the minimal basis cofinal among the basis-like covers?
    Rudimentary { space: PathBuf },
    /// Are all composites in the full system homotopic to the direct bonds?
    Coherence { space: PathBuf },
    /// Do the two spaces have the same weak homotopy type?
    SwCompare { left: PathBuf, right: PathBuf },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ExportKind {
    Hasse,
    OrderComplex,
    Nerve,
    Homology,
}

/// Why a command did not produce a passing report.
pub enum Failure {
    Input(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeGuardExceeded { .. } => Failure::Guard(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let config = &cli.config;
    match cli.command {
        Command::Info { space } => commands::info(&space, config),
        Command::PaperExamples { fixtures } => golden::run(fixtures.as_deref(), config),
        Command::Check(check) => match check {
            Check::BasisLike { cover } => commands::basis_like(&cover, config),
            Check::Refines { fine, coarse } => commands::refines(&fine, &coarse, config),
            Check::LeqC { fine, coarse } => commands::leq_c(&fine, &coarse, config),
            Check::Rudimentary { space } => commands::rudimentary(&space, config),
            Check::Coherence { space } => commands::coherence(&space, config),
            Check::SwCompare { left, right } => commands::sw_compare(&left, &right, config),
        },
        Command::Export { what, input, output } => {
            let report = match what {
                ExportKind::Hasse => commands::export_hasse(&input, config)?,
                ExportKind::OrderComplex => commands::export_order_complex(&input, config)?,
                ExportKind::Nerve => commands::export_nerve(&input, config)?,
                ExportKind::Homology => commands::export_homology(&input, config)?,
            };
            match output {
                Some(path) => {
                    let text = report.render(config.format)?;
                    std::fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Ok(Report::note(format!("wrote {}", path.display())))
                }
                None => Ok(report),
            }
        }
        Command::Sweep { count, max_elements } => commands::sweep(count, max_elements as usize, config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.config.format;
    match run(cli).and_then(|r| Ok((r.render(format)?, r.passed))) {
        Ok((text, passed)) => {
            print!("{text}");
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("guard exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}
