use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stripneg::runner::{self, Command, ExitStatus, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "stripneg", version, about = "Negative-eigenvalue counts and bound audits for magnetic strips")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration (or the JSON config embedded in a report)
    #[arg(long)]
    config: PathBuf,
    /// Report path; stdout when neither this nor output.path is set
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Subcommand)]
enum Sub {
    /// Evaluate the closed-form strip bound
    Bound(Common),
    /// Count negative eigenvalues per mode and on the 2D lattice
    Count(Common),
    /// Audit the bound against numerical counts
    Audit {
        #[command(flatten)]
        common: Common,
        /// Exit 3 if any row has a count above its bound
        #[arg(long)]
        strict: bool,
    },
    /// Audit over flux.psi_list, rows sorted by reduced flux
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        strict: bool,
    },
    /// Hardy-type inequality checks and the 2D failure curve
    Ineq(Common),
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var("STRIPNEG_WORKERS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("STRIPNEG_WORKERS must be a positive integer, got '{raw}'"))?;
    if n == 0 {
        return Err("STRIPNEG_WORKERS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(ExitStatus::ConfigError.code() as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(msg) = configure_workers() {
        eprintln!("error: {msg}");
        return ExitCode::from(ExitStatus::ConfigError.code() as u8);
    }
    let (command, common) = match cli.command {
        Sub::Bound(c) => (Command::Bound, c),
        Sub::Count(c) => (Command::Count, c),
        Sub::Audit { common, strict } => (Command::Audit { strict }, common),
        Sub::Sweep { common, strict } => (Command::Sweep { strict }, common),
        Sub::Ineq(c) => (Command::Ineq, c),
    };
    let result = RunConfig::load(&common.config)
        .and_then(|cfg| runner::run(command, &cfg, common.out, common.format))
        .and_then(|outcome| outcome.write().map(|_| outcome.status));
    match result {
        Ok(status) => {
            if status == ExitStatus::Unsatisfied {
                eprintln!("audit: at least one row has a count above its bound");
            }
            ExitCode::from(status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::for_error(&e).code() as u8)
        }
    }
}
