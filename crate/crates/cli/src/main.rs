mod commands;
mod error;
mod output;
mod parse;
mod reproduce;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use strlink::covers::DEFAULT_EDGE_CAP;
use strlink::cyclo::DEFAULT_PRECISION_CAP;

use commands::{HilbertArgs, KnotInput, LambdaArgs, SigArgs, TowerCmd, WittArgs};
use error::{CliError, Result};
use output::{emit, Format};
use reproduce::ReproduceCmd;

/// Exact invariants of string links in iterated p-covers of a wedge of circles.
#[derive(Parser, Debug)]
#[command(name = "strlink", version)]
struct Cli {
    /// Refuse to build covers with more edges than this.
    #[arg(long, global = true, default_value_t = DEFAULT_EDGE_CAP)]
    cap_edges: usize,
    /// Largest bit precision for certified sign decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Recorded in certificates. Nothing here is random.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Levine-Tristram signature at ζ_d^s, or the whole table.
    Sig(SigArgs),
    /// Arf invariant.
    Arf {
        #[command(flatten)]
        input: KnotInput,
    },
    /// Witt class of a diagonal form, or of one λ-block.
    Witt(WittArgs),
    /// Rational Hilbert symbol.
    Hilbert(HilbertArgs),
    /// Build, lift through and audit iterated covers.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// λ_T of an infected string link.
    Lambda(LambdaArgs),
    /// Rerun a construction and emit its certificate.
    #[command(subcommand)]
    Reproduce(ReproduceCmd),
}

pub struct Globals {
    pub cap_edges: usize,
    pub precision_cap: u32,
    pub seed: u64,
}

fn run(cli: &Cli) -> Result<bool> {
    let g = Globals {
        cap_edges: cli.cap_edges,
        precision_cap: cli.precision_cap,
        seed: cli.seed,
    };
    let (report, out) = match &cli.command {
        Command::Sig(a) => (commands::sig(a, &g)?, None),
        Command::Arf { input } => (commands::arf_cmd(input)?, None),
        Command::Witt(a) => (commands::witt(a, &g)?, None),
        Command::Hilbert(a) => (commands::hilbert(a)?, None),
        Command::Tower(c) => (commands::tower(c, &g)?, None),
        Command::Lambda(a) => (commands::lambda(a, &g)?, None),
        Command::Reproduce(c) => reproduce::run(c, &g)?,
    };
    emit(&report, cli.format, out.as_deref())?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("{}", CliError::Failed);
            ExitCode::from(CliError::Failed.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
