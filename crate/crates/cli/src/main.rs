//! `cpstar`: check Frobenius algebras, CP* maps and groupoid algebras from
//! the command line.
//!
//! Exit status is 0 when every check passes, 1 when one fails and 2 when
//! the input could not be read or is malformed.

mod commands;
mod document;
mod presets;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::CheckCpArgs;
use report::ReportDocument;

#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }
}

impl From<cpstar_core::Error> for CliError {
    fn from(e: cpstar_core::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<String> for CliError {
    fn from(e: String) -> Self {
        CliError(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError(format!("malformed document: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "cpstar", version, about = "Verify Frobenius algebras, CP* maps and groupoid algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Absolute tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Print one JSON report on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized internals.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Frobenius axioms and find a normaliser.
    Verify {
        /// Algebra document, or `-` for standard input.
        path: Option<String>,
        /// pants:d, basis:d, direct-sum:n1,n2,.., z2, cyclic:k, discrete:n, indiscrete:n
        #[arg(long)]
        preset: Option<String>,
    },
    /// Decide complete positivity of a map between two algebras.
    CheckCp {
        /// identity, transpose[:n], depolarizing:p[,n], stochastic:r11,r12;r21,r22
        #[arg(long)]
        preset: Option<String>,
        /// Object for the identity preset.
        #[arg(long)]
        object: Option<String>,
        /// Domain: preset name or algebra document.
        #[arg(long)]
        dom: Option<String>,
        /// Codomain: preset name or algebra document.
        #[arg(long)]
        cod: Option<String>,
        /// Morphism document.
        #[arg(long)]
        map: Option<String>,
    },
    /// Split a complex algebra into matrix blocks.
    Decompose {
        path: Option<String>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Convert between groupoids and boolean algebras.
    Groupoid {
        #[command(subcommand)]
        action: GroupoidCommand,
    },
    /// Work with quantale-valued matrices.
    Quantale {
        #[command(subcommand)]
        action: QuantaleCommand,
    },
}

#[derive(Subcommand)]
enum GroupoidCommand {
    /// Groupoid tables to a boolean algebra.
    ToAlgebra {
        path: Option<String>,
        /// z2, cyclic:k, discrete:n, indiscrete:n
        #[arg(long)]
        preset: Option<String>,
    },
    /// Boolean algebra (or a report containing one) to groupoid tables.
    FromAlgebra {
        path: Option<String>,
        #[arg(long)]
        preset: Option<String>,
    },
    /// Every normalisable Frobenius algebra on a small carrier.
    Enumerate { n: usize },
    /// The groupoid with one morphism between any two of `n` objects.
    Indiscrete { n: usize },
}

#[derive(Subcommand)]
enum QuantaleCommand {
    /// Replace every nonzero entry by 1.
    Collapse { path: String },
    /// Read the groupoid off a normalisable algebra.
    Groupoid { path: String },
}

fn run(cli: &Cli) -> Result<ReportDocument, CliError> {
    let name = match &cli.command {
        Command::Verify { .. } => "verify",
        Command::CheckCp { .. } => "check-cp",
        Command::Decompose { .. } => "decompose",
        Command::Groupoid { action } => match action {
            GroupoidCommand::ToAlgebra { .. } => "groupoid to-algebra",
            GroupoidCommand::FromAlgebra { .. } => "groupoid from-algebra",
            GroupoidCommand::Enumerate { .. } => "groupoid enumerate",
            GroupoidCommand::Indiscrete { .. } => "groupoid indiscrete",
        },
        Command::Quantale { action } => match action {
            QuantaleCommand::Collapse { .. } => "quantale collapse",
            QuantaleCommand::Groupoid { .. } => "quantale groupoid",
        },
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(CliError::invalid("--tol must be a nonnegative number"));
    }
    let mut report = ReportDocument::new(name, cli.tol, cli.seed);
    let r = &mut report;
    match &cli.command {
        Command::Verify { path, preset } => commands::verify(path.as_deref(), preset.as_deref(), r)?,
        Command::CheckCp { preset, object, dom, cod, map } => {
            let args = CheckCpArgs {
                preset: preset.as_deref(),
                object: object.as_deref(),
                dom: dom.as_deref(),
                cod: cod.as_deref(),
                map: map.as_deref(),
            };
            commands::check_cp(&args, r)?
        }
        Command::Decompose { path, preset } => commands::decompose(path.as_deref(), preset.as_deref(), r)?,
        Command::Groupoid { action } => match action {
            GroupoidCommand::ToAlgebra { path, preset } => commands::groupoid_to(path.as_deref(), preset.as_deref(), r)?,
            GroupoidCommand::FromAlgebra { path, preset } => {
                commands::groupoid_from(path.as_deref(), preset.as_deref(), r)?
            }
            GroupoidCommand::Enumerate { n } => commands::groupoid_enumerate(*n, r)?,
            GroupoidCommand::Indiscrete { n } => commands::groupoid_indiscrete(*n, r)?,
        },
        Command::Quantale { action } => match action {
            QuantaleCommand::Collapse { path } => commands::quantale_collapse(path, r)?,
            QuantaleCommand::Groupoid { path } => commands::quantale_groupoid(path, r)?,
        },
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                match serde_json::to_string_pretty(&report) {
                    Ok(text) => println!("{text}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                print!("{}", report.human());
            }
            if report.pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
