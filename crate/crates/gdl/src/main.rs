use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gdl::{parse_problem, run, CliError, Command, Options};

/// Finite Gabor frames, duality checks and window construction over finite abelian groups.
#[derive(Debug, Parser)]
#[command(name = "gdl", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Problem document (JSON).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,

    /// Result document; printed to stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = gdl_core::DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Spectrogram image path (PGM); a CSV is written next to it.
    #[arg(long, value_name = "FILE")]
    image: Option<PathBuf>,
}

fn check_threads() -> Result<(), CliError> {
    match std::env::var("GDL_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Ok(v) if v.trim().parse::<usize>().is_ok_and(|n| n > 0) => Ok(()),
        _ => Err(CliError::Invalid("GDL_THREADS must be a positive integer".into())),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    check_threads()?;
    let text = std::fs::read_to_string(&cli.input).map_err(|e| CliError::io(cli.input.display().to_string(), e))?;
    let doc = parse_problem(&text)?;
    let opts = Options { seed: cli.seed, tolerance: cli.tolerance, image: cli.image.clone() };
    let result = run(cli.command, &doc, &opts)?;
    let json = serde_json::to_string_pretty(&result).map_err(|e| CliError::Numeric(e.to_string()))?;
    match &cli.out {
        Some(path) => std::fs::write(path, json + "\n").map_err(|e| CliError::io(path.display().to_string(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{json}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io("<stdout>", e)),
                _ => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gdl: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
