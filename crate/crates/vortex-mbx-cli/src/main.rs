//! Command-line front end for the ladder-medium conversion toolkit.
//!
//! Exit codes: 0 success, 1 configuration or physics rejection, 2 usage
//! error, 3 oracle mismatch from `validate`.

mod commands;
mod config;
mod csvio;
mod error;
mod raster;

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{load_config, OutputFormat};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "vortex-mbx",
    version,
    about = "Sum-frequency conversion of a vortex probe in a driven three-level medium",
    after_help = "Environment: VORTEX_MBX_THREADS caps the worker pool (default: all cores)."
)]
struct Cli {
    /// JSON run configuration; omitted means built-in defaults
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's output.dir)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Dotted-key override applied after the config file, e.g. probe.ell=2
    #[arg(long, global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Artifact kinds to write (overrides the config's output.format)
    #[arg(long, global = true, value_name = "KIND")]
    format: Option<OutputFormat>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Conversion efficiency vs distance and vs detuning, with per-medium optima
    Efficiency,
    /// Absorption/dispersion spectra per concentration and regime classification
    Spectra,
    /// Transverse field maps: CSVs, intensity/phase and signed-coherence rasters
    Fieldmap,
    /// Run the numerical oracle suite and report every check
    Validate,
    /// Print the built-in concentration parameter table
    Table,
}

fn main() {
    // clap exits 2 on usage errors and 0 for --help/--version on its own
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn init_thread_pool() -> Result<(), CliError> {
    match std::env::var("VORTEX_MBX_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let threads: usize = raw.trim().parse().map_err(|_| {
                CliError::Config(format!(
                    "VORTEX_MBX_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            if threads == 0 {
                return Err(CliError::Config(
                    "VORTEX_MBX_THREADS must be at least 1".into(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| CliError::Config(format!("thread pool setup failed: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_thread_pool()?;
    match cli.command {
        Command::Table => {
            commands::print_table();
            Ok(())
        }
        Command::Validate => commands::validate(),
        Command::Efficiency | Command::Spectra | Command::Fieldmap => {
            let mut cfg = load_config(cli.config.as_deref(), &cli.set)?;
            if let Some(dir) = cli.out {
                cfg.output.dir = dir;
            }
            if let Some(format) = cli.format {
                cfg.output.format = format;
            }
            let resolved = cfg.resolve()?;

            fs::create_dir_all(&resolved.out_dir).map_err(|source| CliError::Io {
                path: resolved.out_dir.clone(),
                source,
            })?;
            let effective = resolved.out_dir.join("effective_config.json");
            let dump = serde_json::to_string_pretty(&cfg)
                .expect("run config always serializes")
                + "\n";
            fs::write(&effective, dump).map_err(|source| CliError::Io {
                path: effective.clone(),
                source,
            })?;

            match cli.command {
                Command::Efficiency => commands::efficiency(&resolved, &resolved.out_dir),
                Command::Spectra => commands::spectra(&resolved, &resolved.out_dir),
                Command::Fieldmap => commands::fieldmap(&resolved, &resolved.out_dir),
                _ => unreachable!("artifact arm only"),
            }
        }
    }
}
