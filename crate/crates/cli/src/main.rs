mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{expand_config, Cli};

fn main() -> ExitCode {
    let argv = match expand_config(std::env::args_os().collect()) {
        Ok(argv) => argv,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<ExitCode> {
    let outcome = commands::run(&cli.command)?;
    let io = cli.command.io();
    let format = io.format.unwrap_or(outcome.output.default_format);
    let text = outcome.output.render(format);
    output::emit(&text, io.out.as_deref(), cli.command.name(), format)?;
    if outcome.violations.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for v in &outcome.violations {
        eprintln!("contract violated: {v}");
    }
    Ok(ExitCode::from(2))
}
