//! Thin CLI over the experiment runner.
//!
//! `rmtlab run <config.json> [--threads N] [--out DIR] [--dump]`
//! `rmtlab validate <config.json>`
//! `rmtlab selftest`
//!
//! Exit codes: 0 pass, 1 acceptance-check failure, 2 config error,
//! 3 numerical error.

use clap::{Parser, Subcommand};
use rmtlab::config::RunConfig;
use rmtlab::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rmtlab", about = "heavy-tailed random matrix laboratory", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Worker threads (default: logical cores, or RMT_THREADS).
        #[arg(long)]
        threads: Option<usize>,
        /// Output directory (default: the config's output_dir, or ".").
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also dump the first trial's H and X matrices in binary form.
        #[arg(long)]
        dump: bool,
    },
    /// Check a config against the parameter constraint set and exit.
    Validate { config: PathBuf },
    /// Run the quick exact-identity suite.
    Selftest,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidParams(_) | Error::Json(_) => 2,
        _ => 3,
    }
}

fn init_threads(cli_threads: Option<usize>) {
    let n = cli_threads.or_else(|| {
        std::env::var("RMT_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        // ignore failure: the global pool may already exist in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            threads,
            out,
            dump,
        } => {
            init_threads(threads);
            let (cfg, raw) = match RunConfig::load(&config) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(exit_code_for(&e));
                }
            };
            let out_dir = out
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            match rmtlab::runner::execute(&cfg, &raw, &out_dir, dump) {
                Ok(summary) => {
                    for c in &summary.checks {
                        println!(
                            "{} {}: value {:.6e} vs threshold {:.6e}",
                            if c.pass { "PASS" } else { "FAIL" },
                            c.name,
                            c.value,
                            c.threshold
                        );
                    }
                    println!(
                        "wrote {} artifact(s) to {} in {:.1}s",
                        summary.files.len() + 1,
                        out_dir.display(),
                        summary.wall_seconds
                    );
                    if summary.all_checks_pass() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code_for(&e))
                }
            }
        }
        Command::Validate { config } => match RunConfig::load(&config) {
            Ok((cfg, _)) => {
                println!(
                    "config ok: {:?} experiment, N = {}, alpha = {}",
                    cfg.experiment, cfg.ensemble.n, cfg.ensemble.alpha
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code_for(&e))
            }
        },
        Command::Selftest => {
            let lines = rmtlab::runner::selftest_lines();
            let mut all = true;
            for (name, pass) in &lines {
                println!("{} {}", if *pass { "PASS" } else { "FAIL" }, name);
                all &= *pass;
            }
            if all {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
