//! `qcompact`: batch front end for the qcompact computations and checks.
//!
//! Exit status: 0 ok, 1 input error, 2 verification failure, 3 inconclusive.

mod commands;
mod config;
mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Command, Format, Params, RunConfig};
use error::CliError;
use input::Inputs;
use report::{Report, Status};

#[derive(Parser)]
#[command(name = "qcompact", version, about = "Quantitative compactness computations on finite instances")]
struct Cli {
    /// JSON run configuration; replaces the subcommand form.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report destination (written atomically); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact ρ_λ between two measures, with coupling and violation certificates.
    ProkhorovDist(Run),
    /// Total variation distance between two measures.
    TvDist(Run),
    /// Tightness estimate of a measure family on an ε grid.
    MuUt(Run),
    /// Greedy covering radii, packing bounds and exact k-center radii.
    CoverProfile(Run),
    /// Modulus of continuity of each path.
    Modulus(Run),
    /// Chebyshev center of a point set.
    Cheby(Run),
    /// Jung bounds for a point set.
    JungCheck(Run),
    /// Constructive net for a path family.
    AaNet(Run),
    /// Net-based check for a measure family.
    VerifyQprokh(Run),
    /// Net-based check for a path family.
    VerifyQaa(Run),
    /// Net-based check for a family of path ensembles.
    VerifyQsaa(Run),
    /// Seeded ±1 random walks as a uniform ensemble.
    GenWalks(Run),
}

#[derive(clap::Args)]
struct Run {
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    params: Params,
}

impl Sub {
    fn into_parts(self) -> (Command, Run) {
        match self {
            Sub::ProkhorovDist(r) => (Command::ProkhorovDist, r),
            Sub::TvDist(r) => (Command::TvDist, r),
            Sub::MuUt(r) => (Command::MuUt, r),
            Sub::CoverProfile(r) => (Command::CoverProfile, r),
            Sub::Modulus(r) => (Command::Modulus, r),
            Sub::Cheby(r) => (Command::Cheby, r),
            Sub::JungCheck(r) => (Command::JungCheck, r),
            Sub::AaNet(r) => (Command::AaNet, r),
            Sub::VerifyQprokh(r) => (Command::VerifyQprokh, r),
            Sub::VerifyQaa(r) => (Command::VerifyQaa, r),
            Sub::VerifyQsaa(r) => (Command::VerifyQsaa, r),
            Sub::GenWalks(r) => (Command::GenWalks, r),
        }
    }
}

fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let mut config = match (cli.config, cli.command) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input("give either --config or a subcommand, not both".into()))
        }
        (None, None) => return Err(CliError::Input("no command given (see --help)".into())),
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let mut config = RunConfig::from_json(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            // Config-relative input paths.
            let base = path.parent().map(PathBuf::from).unwrap_or_default();
            for p in &mut config.inputs {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
            config
        }
        (None, Some(sub)) => {
            let (command, run) = sub.into_parts();
            RunConfig {
                command,
                inputs: run.inputs,
                params: run.params,
                output: None,
                format: Format::default(),
            }
        }
    };
    if cli.seed.is_some() {
        config.params.seed = cli.seed;
    }
    if cli.out.is_some() {
        config.output = cli.out;
    }
    if let Some(f) = cli.format {
        config.format = f;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<Status, CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Input(format!("--threads: {e}")))?;
    }
    let config = resolve(cli)?;
    let mut inputs = Inputs::default();
    let mut params = config.params.clone();
    let outcome = commands::execute(&config, &mut inputs, &mut params)?;
    let body = match config.format {
        Format::Json => report::to_json(&Report {
            command: config.command.name(),
            inputs: inputs.records(),
            params: &params,
            status: outcome.status,
            result: &outcome.result,
        })?,
        Format::Csv => outcome.table.render(),
    };
    report::emit(config.output.as_deref(), &body)?;
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
