use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use koszul_cli::{run, Command, Options, ReportFormat, DEFAULT_MAX_DEGREE};

/// Koszulity checks, quadratic duals and twisted tensor products of quadratic algebras.
#[derive(Parser, Debug)]
#[command(name = "koszul", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Presentation file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    /// `rational` or `gfP`; overrides the file.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report: ReportFormat,
    /// Random input when no file is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Drop coring components above this degree (debugging).
    #[arg(long)]
    coring_truncate: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let bytes = match &cli.input {
        Some(path) => match std::fs::read(path) {
            Ok(b) => Some(b),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    let opts = Options {
        max_degree: cli.max_degree,
        field: cli.field,
        seed: cli.seed,
        coring_truncate: cli.coring_truncate,
    };
    match run(cli.command, bytes.as_deref(), &opts) {
        Ok(out) => {
            print!("{}", out.report.render(cli.report));
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
