use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fracdyn_cli::{parse_config, run, CliError, Command};

/// Fractional p-Laplacian certificates, solves and diagnostics.
#[derive(Debug, Parser)]
#[command(name = "fracdyn", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration (optional for mnc and selftest).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let config = match &args.config {
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            Some(parse_config(&src).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let stdout = std::io::stdout();
    run(args.command, config.as_ref(), &args.out, &mut stdout.lock())?;
    Ok(())
}
