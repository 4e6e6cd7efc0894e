use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cnplab_cli::{experiments, resolve_out_dir, run_config, stem, symbols};

#[derive(Parser)]
#[command(
    name = "cnplab",
    version,
    about = "Finite-sample experiments on complete Pick spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory [default: config "out", then $CNPLAB_OUT_DIR, then ./cnplab-out]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List experiments and named symbols.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            println!("experiments:");
            for e in experiments::EXPERIMENTS {
                println!("  {:<16} {}", e.name, e.summary);
            }
            println!("symbols:");
            for s in symbols::SYMBOLS {
                println!("  {:<16} {}", s.name, s.summary);
            }
            println!("  {{\"constant\"}}     [re, im]");
            println!("  {{\"table\"}}        [[re, im], ...], one value per point");
            ExitCode::SUCCESS
        }
        Command::Run { config, out, seed } => {
            let report = match run_config(&config, seed) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let dir = resolve_out_dir(out.as_deref(), &report.config);
            let files = match report.write(&dir, &stem(&config)) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            for a in &report.assertions {
                println!(
                    "{}  {}: {}",
                    if a.passed { "PASS" } else { "FAIL" },
                    a.name,
                    a.detail
                );
            }
            for f in files {
                println!("wrote {}", f.display());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
