mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Failure, Output};

const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREE: u8 = 2;
const EXIT_GUARD: u8 = 3;

fn dispatch(cli: &Cli) -> commands::CmdResult {
    let (f, cap) = (cli.format, cli.max_cells);
    match &cli.command {
        Command::Count { point, convention } => {
            commands::count(point.codim, point.degree, *convention, f, cap)
        }
        Command::Table { bounds, convention } => {
            commands::table(bounds.cmax, bounds.dmax, *convention, f, cap)
        }
        Command::Simple { bounds } => commands::simple(bounds.cmax, bounds.dmax, f, cap),
        Command::Verify {
            only,
            degree,
            scale,
        } => commands::verify(only.as_deref(), *degree, *scale, f, cap),
        Command::Asymptotics { degree, cmax } => commands::asymptotics(*degree, *cmax, f),
        Command::Oracle { degree, dump } => commands::oracle(*degree, *dump, f),
    }
}

fn emit(cli: &Cli, out: &Output) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, &out.body),
        None => std::io::stdout().lock().write_all(out.body.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("acampo: cannot write output: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            if out.agree {
                ExitCode::SUCCESS
            } else {
                eprintln!("acampo: routes disagree or a mandatory check failed");
                ExitCode::from(EXIT_DISAGREE)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("acampo: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Guard(m)) => {
            eprintln!("acampo: resource guard: {m}");
            ExitCode::from(EXIT_GUARD)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("acampo: computation failed: {m}");
            ExitCode::from(EXIT_DISAGREE)
        }
    }
}
