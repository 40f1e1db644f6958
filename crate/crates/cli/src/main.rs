//! `qtlab`: reports on graphs, group actions, products and the planar ℤ² arithmetic.
//!
//! Exit codes: 0 success, 2 invalid input (JSON diagnostic on stderr),
//! 3 refusal because a size cap was exceeded.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qtlab_core::Error;
use serde_json::json;

use args::{Cli, Command, OutputFormat};
use commands::Output;

const REPORT_FORMAT: &str = "qtlab-report-v1";

fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let diag = json!({ "error": { "kind": kind, "message": message }, "exit_code": code });
    eprintln!("{diag}");
    ExitCode::from(code)
}

fn inputs(cmd: &Command) -> serde_json::Value {
    use args::{LmCommand, ProductCommand};
    let v = match cmd {
        Command::Analyze(a) => serde_json::to_value(a),
        Command::Construct(a) => serde_json::to_value(a),
        Command::Orbit(a) => serde_json::to_value(a),
        Command::RipsOrbit(a) => serde_json::to_value(a),
        Command::Classify(a) => serde_json::to_value(a),
        Command::Properness(a) => serde_json::to_value(a),
        Command::Product(ProductCommand::Distance(a)) => serde_json::to_value(a),
        Command::Product(ProductCommand::Geodesics(a)) => serde_json::to_value(a),
        Command::Product(ProductCommand::FactorCheck(a)) => serde_json::to_value(a),
        Command::Product(ProductCommand::Distortion(a)) => serde_json::to_value(a),
        Command::Lm(LmCommand::Exponents(a)) => serde_json::to_value(a),
        Command::Lm(LmCommand::Obstruction(a)) => serde_json::to_value(a),
        Command::Lm(LmCommand::Fit(a)) => serde_json::to_value(a),
        Command::Fixtures(a) => serde_json::to_value(a),
    };
    v.expect("arguments serialize")
}

fn render(cmd: &Command, out: Output) -> Result<String, Error> {
    let common = cmd.common();
    match common.format {
        OutputFormat::Json => {
            let report = json!({
                "command": cmd.name(),
                "inputs": inputs(cmd),
                "results": out.results,
                "version": { "tool": env!("CARGO_PKG_VERSION"), "format": REPORT_FORMAT },
                "determinism_seed": common.seed,
            });
            Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n")
        }
        OutputFormat::Csv => {
            let table = out
                .table
                .ok_or_else(|| Error::Format(format!("{} has no table; use --format json", cmd.name())))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Format(e.to_string());
            w.write_record(&table.header).map_err(io)?;
            for row in &table.rows {
                w.write_record(row).map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Format(e.to_string()))?)
                .map_err(|e| Error::Format(e.to_string()))
        }
    }
}

fn run(cmd: &Command) -> Result<(), Error> {
    let out = match cmd {
        Command::Analyze(a) => commands::analyze(a),
        Command::Construct(a) => commands::construct(a),
        Command::Orbit(a) => commands::orbit_cmd(a),
        Command::RipsOrbit(a) => commands::rips_orbit(a),
        Command::Classify(a) => commands::classify(a),
        Command::Properness(a) => commands::properness(a),
        Command::Product(p) => commands::product(p),
        Command::Lm(l) => commands::lm(l),
        Command::Fixtures(a) => commands::fixtures(a),
    }?;
    let text = render(cmd, out)?;
    // construct uses --out for the action file itself
    match (&cmd.common().out, cmd) {
        (Some(path), c) if !matches!(c, Command::Construct(_)) => std::fs::write(path, text)
            .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display()))),
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Format(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail("Usage", e.to_string().trim(), 2),
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_size_refusal() => fail(&error_kind(&e), &e.to_string(), 3),
        Err(e) => fail(&error_kind(&e), &e.to_string(), 2),
    }
}
