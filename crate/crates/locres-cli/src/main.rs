mod commands;
mod job;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use commands::{dispatch, run_words, Command, Ctx};
use locres::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "locres", version, about = "Local resolutions, homotopies and matrix factorizations")]
struct Cli {
    /// Add version and elapsed time to the report.
    #[arg(long, global = true)]
    meta: bool,
    /// Compare graded ranks with the Hilbert function oracle.
    #[arg(long, global = true)]
    oracle: bool,
    #[command(subcommand)]
    command: Command,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistent(_) => 1,
        Error::Ceiling(_) => 3,
        _ => 2,
    }
}

fn ceiling() -> Result<Option<u64>, String> {
    match std::env::var("LOCRES_STEP_CEILING") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| format!("LOCRES_STEP_CEILING must be a positive integer, got '{s}'")),
        Err(_) => Ok(None),
    }
}

fn fail(command: &str, e: &Error) -> ExitCode {
    let mut err = json!({"code": e.code(), "message": e.to_string()});
    if let Error::Parse { line, col, .. } = e {
        err["line"] = json!(line);
        err["col"] = json!(col);
    }
    let v = json!({"schemaVersion": SCHEMA_VERSION, "command": command, "error": err});
    eprintln!("{}", serde_json::to_string_pretty(&v).unwrap());
    ExitCode::from(exit_code(e))
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Command::Run { job } = &cli.command {
        let words = match run_words(job) {
            Ok(w) => w,
            Err(e) => return fail("run", &e),
        };
        let mut inner = match Cli::try_parse_from(&words) {
            Ok(c) => c,
            Err(e) => {
                let _ = e.print();
                return ExitCode::from(2);
            }
        };
        if let Command::Run { .. } = inner.command {
            return fail("run", &Error::Domain("a run line cannot call run".into()));
        }
        inner.meta |= cli.meta;
        inner.oracle |= cli.oracle;
        cli = inner;
    }
    let ctx = match ceiling() {
        Ok(c) => Ctx { oracle: cli.oracle, ceiling: c },
        Err(m) => return fail("", &Error::Domain(m)),
    };
    let start = Instant::now();
    let rep = match dispatch(&cli.command, &ctx) {
        Ok(r) => r,
        Err(e) => return fail(cli.command.name(), &e),
    };
    let mut v: Value = rep.to_json();
    if cli.meta {
        v["meta"] = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "elapsedMs": start.elapsed().as_secs_f64() * 1000.0,
        });
    }
    match &rep.table {
        Some(t) => print!("{t}"),
        None => println!("{}", serde_json::to_string_pretty(&v).unwrap()),
    }
    if rep.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
