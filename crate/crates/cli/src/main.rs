mod commands;
mod parse;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orliczlab::{End, Error};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 1;
pub const EXIT_DIVERGENT: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_CONTRADICTION: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "orliczlab", version, about = "Orlicz-Lorentz norms, indices and counterexamples")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Relative bracket tolerance for norms.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Luxemburg, Orlicz-Lorentz or Torchinsky norm of a step function.
    Norm(commands::NormArgs),
    /// Zippin and Boyd index brackets with the dilation profile.
    Indices(commands::IndicesArgs),
    /// Build and verify the block counterexamples.
    Counterexample(commands::CounterexampleArgs),
    /// p-convexity / q-concavity probes.
    Convexity(commands::ConvexityArgs),
    /// Norms of f** and f_**, or the Hardy inequality probe.
    Hardy(commands::HardyArgs),
}

#[derive(Serialize)]
struct Meta<'a> {
    version: &'static str,
    command: &'a str,
    spec_hash: String,
    seed: u64,
    tol: f64,
}

/// What a command produced: a JSON result, CSV rows and an exit code.
pub struct Outcome {
    pub command: &'static str,
    /// Canonical description of the inputs, hashed into the metadata.
    pub inputs: serde_json::Value,
    pub result: serde_json::Value,
    pub csv: String,
    pub code: u8,
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Divergent { .. } => EXIT_DIVERGENT,
        Error::Infeasible(_) | Error::NoRoot(_) => EXIT_INFEASIBLE,
        Error::Inconsistent(_) => EXIT_CONTRADICTION,
        _ => EXIT_PARSE,
    }
}

fn render(global: &Global, o: &Outcome) -> String {
    let hash = hex::encode(Sha256::digest(o.inputs.to_string().as_bytes()));
    let meta = Meta {
        version: env!("CARGO_PKG_VERSION"),
        command: o.command,
        spec_hash: hash,
        seed: global.seed,
        tol: global.tol,
    };
    match global.format {
        Format::Json => {
            let doc = serde_json::json!({ "meta": meta, "inputs": o.inputs, "result": o.result });
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
        Format::Csv => format!(
            "# orliczlab {} {} spec_hash={} seed={} tol={:e}\n{}",
            meta.version, meta.command, meta.spec_hash, meta.seed, meta.tol, o.csv
        ),
    }
}

fn error_doc(e: &Error) -> String {
    let end = match e {
        Error::Divergent { end } => Some(match end {
            End::Zero => "0+",
            End::Infinity => "+inf",
        }),
        _ => None,
    };
    let doc = serde_json::json!({ "status": "error", "exit_code": exit_code(e), "error": e.to_string(), "divergent_end": end });
    serde_json::to_string_pretty(&doc).unwrap()
}

fn run(cli: Cli) -> Result<(Option<String>, u8), Error> {
    let g = &cli.global;
    if !(g.tol > 0.0) || !g.tol.is_finite() {
        return Err(Error::InvalidParameter(format!("--tol must be > 0, got {}", g.tol)));
    }
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("--threads: {e}")))?;
    }
    let outcome = match &cli.command {
        Command::Norm(a) => commands::norm(g, a),
        Command::Indices(a) => commands::indices(g, a),
        Command::Counterexample(a) => commands::counterexample(g, a),
        Command::Convexity(a) => commands::convexity(g, a),
        Command::Hardy(a) => commands::hardy(g, a),
    }?;
    let text = render(g, &outcome);
    match &g.out {
        Some(p) => {
            fs::write(p, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display())))?;
            Ok((None, outcome.code))
        }
        None => Ok((Some(text), outcome.code)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ORLICZLAB_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok((text, code)) => {
            if let Some(t) = text {
                let _ = std::io::stdout().write_all(t.as_bytes());
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("{}", error_doc(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
