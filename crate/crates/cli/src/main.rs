mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Report, EXIT_OSCILLATING, EXIT_USAGE};

fn run(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.command {
        Command::Root(a) => {
            let report = commands::root(a)?;
            if report.code == EXIT_OSCILLATING {
                if let Some(hint) = commands::shift_hint(a) {
                    eprintln!("{hint}");
                }
            }
            Ok(report)
        }
        Command::Roots(a) => commands::roots(a),
        Command::Trace(a) => {
            let (report, note) = commands::trace(a)?;
            if let Some(note) = note {
                eprintln!("{note}");
            }
            Ok(report)
        }
        Command::Table(a) => commands::table(a),
        Command::Delian(a) => commands::delian(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the parse-error exit code
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(report.stdout.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_USAGE as u8);
            }
            ExitCode::from(report.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
