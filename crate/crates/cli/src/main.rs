mod config;
mod run;

use clap::{Args, Parser, Subcommand};
use config::{Flags, Mode, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "invrod", version, about = "Forward and inverse simulation of elastic rod networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deform the given geometry, taken as the rest shape.
    Forward(RunArgs),
    /// Find the rest shape that deforms into the given geometry.
    Inverse(RunArgs),
    /// Inverse solve, then forward from its rest shape; report the mismatch.
    Roundtrip(RunArgs),
    /// Time forward and inverse steps and write bench.csv.
    Bench(RunArgs),
    /// Compare the cantilever rest shape against the reference solution.
    Oracle(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Catalog scenario name, or `cantilever`.
    #[arg(long)]
    scenario: Option<String>,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Step budget.
    #[arg(long)]
    steps: Option<usize>,
    /// Time step in seconds.
    #[arg(long)]
    dt: Option<f64>,
    /// Write an OBJ frame every this many steps.
    #[arg(long)]
    export_every: Option<usize>,
}

impl From<RunArgs> for Flags {
    fn from(a: RunArgs) -> Self {
        Flags {
            scenario: a.scenario,
            config: a.config,
            out: a.out,
            steps: a.steps,
            dt: a.dt,
            export_every: a.export_every,
        }
    }
}

fn fail(kind: &str, err: &anyhow::Error, code: u8) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "message": format!("{err:#}") });
    eprintln!("{line}");
    ExitCode::from(code)
}

fn is_io(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.downcast_ref::<std::io::Error>().is_some()
            || matches!(e.downcast_ref::<invrod_core::Error>(), Some(invrod_core::Error::Io(_)))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Forward(a) => (Mode::Forward, a),
        Command::Inverse(a) => (Mode::Inverse, a),
        Command::Roundtrip(a) => (Mode::Roundtrip, a),
        Command::Bench(a) => (Mode::Bench, a),
        Command::Oracle(a) => (Mode::Oracle, a),
    };
    let cfg = match RunConfig::resolve(mode, args.into()) {
        Ok(c) => c,
        Err(e) if is_io(&e) => return fail("io", &e, EXIT_IO),
        Err(e) => return fail("config", &e, EXIT_USAGE),
    };
    match run::execute(&cfg) {
        Ok(status) => {
            let code = status.code();
            if status != run::Status::Ok {
                let what = match status {
                    run::Status::Diverged => "diverged",
                    _ => "failed",
                };
                let err = anyhow::anyhow!("run ended with status {what}; see {}", cfg.out.join("summary.json").display());
                return fail(what, &err, code as u8);
            }
            ExitCode::SUCCESS
        }
        Err(e) if is_io(&e) => fail("io", &e, EXIT_IO),
        Err(e) if e.downcast_ref::<config::Invalid>().is_some() => fail("config", &e, EXIT_USAGE),
        Err(e) => fail("solver", &e, 1),
    }
}
