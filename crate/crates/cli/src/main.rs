use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use qscode_cli::{run, Cli, ExperimentConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<u8> {
    let config = ExperimentConfig::from_cli(cli)?;
    let report = run(&config)?;
    let body = report.render(config.format)?;
    match &config.output_path {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    eprintln!("wall time {:.3}s", report.wall_time_seconds);
    Ok(report.exit_code())
}
