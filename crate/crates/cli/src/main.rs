mod args;
mod commands;
mod config;
mod output;
mod util;
mod verify;

use args::{Cli, Command};
use clap::Parser;
use std::io::Write;
use std::process::ExitCode;
use util::CliError;

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let report = match &cli.command {
        Command::Coeffs(a) => commands::coeffs(a)?,
        Command::Simulate(a) => commands::simulate(a)?,
        Command::Verify(a) => verify::verify(a)?,
        Command::Plan(a) => commands::plan(a)?,
        Command::Bench(a) => commands::bench(a)?,
    };
    let text = output::render(&report, cli.out, !cli.no_timestamp)?;
    std::io::stdout().lock().write_all(text.as_bytes())?;
    Ok(report.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config::merge(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
