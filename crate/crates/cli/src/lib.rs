//! Command-line driver for the Gaussian double-double-slit model.
//!
//! [`run`] takes an argument vector and explicit output streams and returns
//! the process exit status: 0 on success, 1 for internal errors or failed
//! checks, 2 for usage and validation errors.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod parallel;
pub mod verify;

#[cfg(test)]
mod tests;

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use crate::args::{help_json, Cli, Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{sink, write_json};

/// Standard streams, injectable for tests.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, io: Streams<'_>) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    if argv.iter().any(|a| a == "--help-json") {
        let names: Vec<String> = Cli::command()
            .get_subcommands()
            .map(|c| c.get_name().to_owned())
            .collect();
        let sub = argv
            .iter()
            .skip(1)
            .filter_map(|a| a.to_str())
            .find(|a| names.iter().any(|n| n == a));
        return match write_json(&mut *io.stdout, &help_json(sub)) {
            Ok(()) => 0,
            Err(e) => report(io.stderr, &e),
        };
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if informational { io.stdout } else { io.stderr };
            let _ = write!(target, "{}", e.render().ansi());
            return if informational { 0 } else { 2 };
        }
    };
    match dispatch(cli.command, io.stdin, io.stdout, io.stderr) {
        Ok(()) => 0,
        Err(e) => report(io.stderr, &e),
    }
}

fn report(stderr: &mut dyn Write, e: &CliError) -> u8 {
    let _ = writeln!(stderr, "epr-dds: error: {e}");
    e.exit_status()
}

/// Writes to `--out` if given, else to `stdout`.
fn emit(
    out: Option<&std::path::Path>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> CliResult<()>,
) -> CliResult<()> {
    match out {
        Some(_) => body(&mut sink(out)?),
        None => body(stdout),
    }
}

fn dispatch(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Density(args) => {
            let cfg = RunConfig::for_density(&args)?;
            let table = commands::density(&cfg, args.joint)?;
            emit(cfg.out.as_deref(), stdout, |w| table.write(cfg.format, w))
        }
        Command::Scan(args) => {
            let table = commands::scan(&args)?;
            emit(args.output.out.as_deref(), stdout, |w| {
                table.write(args.output.format, w)
            })
        }
        Command::Sample(args) => {
            let cfg = RunConfig::for_sample(&args)?;
            let run = commands::sample(&cfg, args.n, args.workers)?;
            emit(cfg.out.as_deref(), stdout, |w| run.table.write(cfg.format, w))?;
            match (&args.summary, &cfg.out) {
                (Some(path), _) => write_json(sink(Some(path))?, &run.summary),
                (None, Some(_)) => write_json(stdout, &run.summary),
                (None, None) => write_json(stderr, &run.summary),
            }
        }
        Command::Purify(args) => {
            let value = commands::purify(&args)?;
            emit(args.out.as_deref(), stdout, |w| write_json(w, &value))
        }
        Command::Multipath(args) => {
            let value = commands::multipath_from_args(&args, stdin)?;
            emit(args.out.as_deref(), stdout, |w| write_json(w, &value))
        }
        Command::Verify(args) => {
            let opts = verify::VerifyOptions {
                workers: args.workers,
                seed: args.seed,
                criteria: args.criteria,
            };
            let report = verify::run(&opts)?;
            let value = serde_json::to_value(&report)?;
            emit(args.out.as_deref(), stdout, |w| write_json(w, &value))?;
            for check in report.checks.iter().filter(|c| !c.passed) {
                let _ = writeln!(
                    stderr,
                    "FAIL {}: {} (measured {:e}, tolerance {:e})",
                    check.id, check.name, check.measured, check.tolerance
                );
            }
            if report.passed {
                Ok(())
            } else {
                Err(CliError::ChecksFailed {
                    failed: report.failed(),
                    total: report.checks.len(),
                })
            }
        }
    }
}
