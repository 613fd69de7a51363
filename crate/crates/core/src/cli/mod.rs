//! Command-line front end: input syntax, subcommands, reports and SVG.

pub mod args;
pub mod commands;
pub mod parse;
pub mod report;
pub mod svg;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use commands::{execute, CliError};
pub use parse::{parse_germ, GermExpression, ParseError, ParseErrorKind, Parsed};
pub use report::{Report, Verdict};

/// Result of one invocation: standard output, standard error, exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses arguments and runs the command without touching the process
/// streams. Output requested with `--out` is written to that file.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Invocation {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                },
                _ => Invocation {
                    stdout: String::new(),
                    stderr: text,
                    code: 1,
                },
            };
        }
    };
    match execute(&cli) {
        Ok((text, code)) => match &cli.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Invocation {
                    stdout: String::new(),
                    stderr: String::new(),
                    code,
                },
                Err(e) => Invocation {
                    stdout: String::new(),
                    stderr: format!("error: {}: {e}\n", path.display()),
                    code: 1,
                },
            },
            None => Invocation {
                stdout: text,
                stderr: String::new(),
                code,
            },
        },
        Err(e) => Invocation {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 1,
        },
    }
}
