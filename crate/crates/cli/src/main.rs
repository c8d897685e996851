//! `affaut`: command-line access to automorphisms of the affine line over
//! non-reduced rings, Witt vectors, Greenberg group laws and adjoint
//! representations.

mod args;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, Format};

/// Failures reported by the binary: usage errors exit with 2, library and
/// I/O errors with 1.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Domain(affaut::Error),
}

impl From<affaut::Error> for Failure {
    fn from(e: affaut::Error) -> Self {
        Failure::Domain(e)
    }
}

/// What a command produced: a JSON document and its plain-text rendering.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
}

fn emit(cli: &Cli, out: &Output) -> Result<(), Failure> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize") + "\n",
        Format::Text => {
            let mut t = out.text.clone();
            if !t.ends_with('\n') {
                t.push('\n');
            }
            t
        }
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

/// Prints a clap error, listing the verbs when none was recognized.
fn usage(e: clap::Error) -> ExitCode {
    let _ = e.print();
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        return ExitCode::SUCCESS;
    }
    if matches!(e.kind(), ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand) {
        let verbs: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
        eprintln!("valid verbs: {}", verbs.join(", "));
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => return usage(e),
    };
    let result = commands::run(&cli).and_then(|out| emit(&cli, &out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: Io: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}
