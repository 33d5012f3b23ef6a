use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tflocal_cli::{run_file, Command};

/// Numerical lab for time-frequency and wavelet localization operators.
#[derive(Parser)]
#[command(name = "tflocal", version)]
struct Args {
    command: Command,
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized checks; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run_file(args.command, &args.config, args.out, args.seed) {
        Ok(summary) => {
            for line in &summary.lines {
                println!("{line}");
            }
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("tflocal {}: {e}", args.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
