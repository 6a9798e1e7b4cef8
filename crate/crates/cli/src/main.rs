use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

mod commands;
mod report;

#[derive(Parser)]
#[command(name = "relstab", version, about = "Relatively stable module categories over GF(p)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one engine operation on catalog names or JSON files.
    Op(OpArgs),
    /// Wrap a short exact sequence of kG-modules into a k[G×C_p]-module.
    Wrap {
        p: u32,
        ses: String,
        /// Also compare splitting with relative projectivity of the result.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full verification suite.
    VerifyPaper {
        #[arg(long, default_value_t = 7)]
        pmax: u32,
        /// Extra JSON files to validate with the catalog.
        #[arg(long = "fixture")]
        fixtures: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// List the built-in catalog.
    Catalog,
}

#[derive(Args)]
pub struct OpArgs {
    pub verb: Verb,
    pub args: Vec<String>,
    /// Module selecting the relative context.
    #[arg(long)]
    pub w: Option<String>,
    /// Require every input to be over GF(p).
    #[arg(long)]
    pub p: Option<u32>,
    /// Write a module-valued result here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Search bound for the exhaustive oracles.
    #[arg(long)]
    pub bound: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Verb {
    Tensor,
    Dual,
    Sum,
    Restrict,
    Induce,
    Omega,
    OmegaInv,
    IsRelProj,
    IsWSplit,
    StableHom,
    Cone,
    Hocolim,
    IsSummand,
    StablyIso,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Op(args) => commands::op(&args),
        Command::Wrap { p, ses, verify, out } => commands::wrap(p, &ses, verify, out.as_deref()),
        Command::VerifyPaper { pmax, fixtures, seed, bound } => Ok(commands::verify_paper(pmax, fixtures, seed, bound)),
        Command::Catalog => Ok(commands::catalog()),
    };
    match outcome {
        Ok(report) => {
            println!("{}", report.to_json());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            let err = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            println!("{}", serde_json::to_string_pretty(&err).expect("json"));
            ExitCode::from(2)
        }
    }
}
