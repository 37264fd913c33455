use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use linksim_cli::runner::{run_scenario, RunOptions};
use linksim_cli::{config::validate_config, presets};

#[derive(Parser)]
#[command(name = "linksim", version, about = "Deterministic link-level wireless simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file (or embedded preset) and write CSV artifacts
    Run {
        /// Path to a scenario file, or the name of an embedded preset
        config: String,
        /// Output directory for artifacts
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the scenario's master seed
        #[arg(long)]
        seed: Option<u64>,
        /// Worker thread count (default: all cores)
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write each chain stage of the first combination to CSV
        #[arg(long)]
        dump_stages: bool,
    },
    /// Validate a scenario file and echo the fully resolved settings
    Validate {
        /// Path to a scenario file, or the name of an embedded preset
        config: String,
    },
    /// Embedded scenario presets
    Presets {
        #[command(subcommand)]
        cmd: PresetsCmd,
    },
}

#[derive(Subcommand)]
enum PresetsCmd {
    /// List the embedded preset names
    List,
}

fn load_config_text(arg: &str) -> Result<String, String> {
    let path = Path::new(arg);
    if path.exists() {
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
    } else if let Some(text) = presets::find(arg) {
        Ok(text.to_string())
    } else {
        Err(format!("no such config file or preset: {arg}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run {
            config,
            out,
            seed,
            jobs,
            dump_stages,
        } => {
            let text = match load_config_text(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let mut cfg = match validate_config(&text) {
                Ok(c) => c,
                Err(errors) => {
                    eprintln!("invalid config:");
                    for e in errors {
                        eprintln!("  {e}");
                    }
                    return ExitCode::from(1);
                }
            };
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let opts = RunOptions { jobs, dump_stages };
            match run_scenario(&cfg, &out, &opts) {
                Ok(summary) => {
                    print!("{}", summary.render());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Cmd::Validate { config } => {
            let text = match load_config_text(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            match validate_config(&text) {
                Ok(cfg) => {
                    println!("OK");
                    print!("{}", cfg.describe());
                    ExitCode::SUCCESS
                }
                Err(errors) => {
                    eprintln!("invalid config:");
                    for e in errors {
                        eprintln!("  {e}");
                    }
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Presets { cmd } => match cmd {
            PresetsCmd::List => {
                for (name, _) in presets::PRESETS {
                    println!("{name}");
                }
                ExitCode::SUCCESS
            }
        },
    }
}
