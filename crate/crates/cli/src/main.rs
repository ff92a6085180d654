//! `npms`: command-line front end for the lensing, spherical-mass, flow and Weyl-metric
//! computations. Exit codes: 0 success, 2 invalid input, 3 numerical or output failure.

// Guards are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod error;
mod svg;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use cli::Cli;
use error::{CliError, CliResult};

fn known_flags(subcommand: &str) -> Vec<String> {
    Cli::command()
        .find_subcommand(subcommand)
        .map(|c| {
            c.get_arguments()
                .filter_map(|a| a.get_long().map(str::to_string))
                .filter(|l| l != "config")
                .collect()
        })
        .unwrap_or_default()
}

fn parse_args(mut args: Vec<String>) -> Result<Cli, ExitCode> {
    let fail = |e: CliError| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    };
    let merged = (|| -> CliResult<()> {
        if let Some(path) = config::take_config_path(&mut args)? {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("--config {path}: {e}")))?;
            let entries = config::parse(&text)?;
            let sub = args
                .iter()
                .skip(1)
                .find(|a| !a.starts_with('-'))
                .cloned()
                .unwrap_or_default();
            config::merge(&mut args, &entries, &known_flags(&sub))?;
        }
        Ok(())
    })();
    merged.map_err(fail)?;
    Cli::try_parse_from(&args).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            ExitCode::from(2)
        } else {
            ExitCode::SUCCESS
        }
    })
}

fn execute(cli: &Cli) -> CliResult<()> {
    let report = commands::run(&cli.command)?;
    let output = cli.command.output();
    if let Some(path) = &output.svg {
        svg::emit_svg(&report.plot, path)?;
    }
    match &output.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|source| CliError::Write {
                path: path.clone(),
                source,
            })?;
            report.table.write(std::io::BufWriter::new(file))?;
        }
        None => report.table.write(std::io::stdout().lock())?,
    }
    let mut err = std::io::stderr().lock();
    for line in &report.summary {
        let _ = writeln!(err, "{line}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match parse_args(std::env::args().collect()) {
        Ok(c) => c,
        Err(code) => return code,
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
