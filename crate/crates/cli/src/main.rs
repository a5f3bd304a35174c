use std::process::ExitCode;

use clap::Parser;
use weakcr_cli::commands::Format;
use weakcr_cli::{execute, Cli, CliError};

fn fail(err: &CliError, format: Format) -> ExitCode {
    match format {
        Format::Json => eprintln!("{}", err.to_json()),
        Format::Text => eprintln!("error: {err}"),
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let report = match execute(&cli, args) {
        Ok(r) => r,
        Err(e) => return fail(&e, cli.format),
    };
    if let Some(path) = &cli.out {
        let body = if path.extension().is_some_and(|e| e == "csv") {
            report.to_csv().unwrap_or_default()
        } else {
            report.to_json()
        };
        if let Err(e) = std::fs::write(path, body) {
            return fail(
                &CliError::Usage(format!("cannot write {}: {e}", path.display())),
                cli.format,
            );
        }
    }
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => {
            print!("{}", report.to_text());
            if !report.passed {
                println!("failures: {}", report.failures.join(", "));
            }
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
