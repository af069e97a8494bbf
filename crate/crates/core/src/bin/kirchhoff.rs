use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use kirchhoff::cli::{parse_config, run};
use kirchhoff::Error;

/// Run a variable-exponent Kirchhoff problem from a key=value config file.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Configuration file.
    config: PathBuf,
    /// Overrides `out_dir` from the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = match err.downcast_ref::<Error>() {
                Some(e) => {
                    eprintln!("error[{}]: {e}", e.class());
                    e.exit_code()
                }
                None => {
                    eprintln!("error[IoError]: {err:#}");
                    2
                }
            };
            ExitCode::from(code as u8)
        }
    }
}

fn execute(args: &Args) -> anyhow::Result<String> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = parse_config(&text)?;
    if let Some(dir) = &args.out_dir {
        cfg.out_dir = dir.clone();
    }
    Ok(run(&cfg)?.report)
}
