//! `opa-cli`: one computation per invocation, recorded as a JSON run
//! artifact (plus CSV for tables).
//!
//! Exit status: 0 on success, 2 for domain errors, 3 for budget and
//! convergence errors, 64 for usage errors, 74 when the artifact cannot be
//! written. Errors are also printed on stdout as a JSON object.

mod args;
mod artifact;
mod commands;
mod config;
mod error;
mod selftest;

use std::process::ExitCode;
use std::time::Instant;

use chrono::Utc;
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use crate::args::Cli;
use crate::artifact::{artifact_path, write_atomic, RunArtifact};
use crate::config::Config;
use crate::error::{CliError, EXIT_USAGE};

fn run(cli: Cli) -> Result<serde_json::Value, CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    let name = cli.command.name();
    let start = Instant::now();
    let outcome = commands::execute(&cli.command, &cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    let now = Utc::now();

    let mut diagnostics = match outcome.diagnostics {
        serde_json::Value::Object(m) => m,
        _ => serde_json::Map::new(),
    };
    diagnostics.insert("elapsed_seconds".into(), json!(elapsed));
    let inputs = json!({
        "argv": std::env::args().skip(1).collect::<Vec<_>>(),
        "parameters": outcome.parameters,
        "files": outcome.files,
        "config": { "path": cli.config.as_ref().map(|p| p.display().to_string()), "values": commands::value(&cfg) },
    });
    let artifact = RunArtifact::new(name, inputs, outcome.outputs, diagnostics.into(), now);

    let path = artifact_path(cli.out.as_deref(), name, now);
    let mut text = opa_core::json::to_string(&artifact).expect("artifact serializes");
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    let csv_path = match &outcome.csv {
        Some(csv) => {
            let p = path.with_extension("csv");
            write_atomic(&p, csv.as_bytes())?;
            Some(p.display().to_string())
        }
        None => None,
    };
    if let Some(err) = outcome.failure {
        return Err(err);
    }
    Ok(json!({ "command": name, "artifact": path.display().to_string(), "csv": csv_path }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
