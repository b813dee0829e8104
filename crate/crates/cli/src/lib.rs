//! Command-line front end for the `quantum-dialogue` crate.
//!
//! The binary is a thin wrapper around [`run`], which takes the argument
//! vector and output sinks so the whole tool can be driven from tests.

pub mod args;
pub mod commands;
pub mod document;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };

    let out_path = match &cli.command {
        Command::Verify(a) => a.output.out.clone(),
        Command::Exact(a) => a.output.out.clone(),
        Command::Simulate(a) => a.output.out.clone(),
        Command::Trace(a) => a.output.out.clone(),
        Command::Table(a) => a.output.out.clone(),
    };

    let outcome = match &cli.command {
        Command::Verify(a) => Ok(commands::verify(a)),
        Command::Exact(a) => Ok(commands::exact(a)),
        Command::Simulate(a) => commands::simulate(a),
        Command::Trace(a) => Ok(commands::trace(a)),
        Command::Table(a) => commands::table(a),
    };
    let Outcome { body, status } = match outcome {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            return EXIT_FAILURE;
        }
    };

    match out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &body) {
                let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
                return EXIT_FAILURE;
            }
            let _ = writeln!(stderr, "wrote {}", path.display());
        }
        None => {
            if stdout.write_all(body.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
        }
    }
    status
}
