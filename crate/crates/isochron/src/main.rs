use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isochron::{run, AnalysisConfig, CliError, Command, OutputFormat, Overrides};

#[derive(Parser)]
#[command(name = "isochron", version, about = "Period functions and isochronicity certificates for piecewise potential systems")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Analysis configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Expansion order override.
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Center type of the origin.
    Classify,
    /// Numerical period function over the energy grid.
    Table,
    /// Exact period expansion.
    Expand,
    /// Log–log divergence fit of a degenerate side.
    Diverge,
    /// Direct ODE simulation of one return.
    Simulate,
    /// Isochronicity certificate.
    Verdict,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Csv,
    Json,
}

fn command(sub: Sub) -> Command {
    match sub {
        Sub::Classify => Command::Classify,
        Sub::Table => Command::Table,
        Sub::Expand => Command::Expand,
        Sub::Diverge => Command::Diverge,
        Sub::Simulate => Command::Simulate,
        Sub::Verdict => Command::Verdict,
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Output { path: path.display().to_string(), source })
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config { field: "--config".into(), message: "a configuration file is required".into() })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config { field: "--config".into(), message: format!("cannot read {}: {e}", path.display()) })?;
    let overrides = Overrides {
        order: cli.order,
        format: cli.format.map(|f| match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }),
        out: cli.out.clone(),
    };
    let cfg = AnalysisConfig::from_json_text(&text, &overrides)?;
    let artifacts = run(command(cli.command), &cfg)?;
    for (extra_path, body) in &artifacts.extra {
        write_file(extra_path, body)?;
    }
    match &cfg.out {
        Some(out) => write_file(out, &artifacts.primary),
        None => std::io::stdout()
            .write_all(artifacts.primary.as_bytes())
            .map_err(|source| CliError::Output { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
