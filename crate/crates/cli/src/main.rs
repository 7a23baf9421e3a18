use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectral_gates_cli::commands::{self, Common, SpectrumArgs, SweepArgs, SynthesizeArgs};
use spectral_gates_cli::formats::PRESETS;
use spectral_gates_cli::Result;

/// Synthesize and check frequency-bin quantum gates built from pulse
/// shapers and electro-optic phase modulators.
///
/// Exit status: 0 feasible / success, 2 completed but infeasible, 1 error.
#[derive(Parser)]
#[command(name = "spectral-gates", version)]
struct Cli {
    /// Worker threads for multi-start optimization (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize device phases for a gate and write a solution file.
    Synthesize {
        /// TOML run config.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Bundled config instead of a file.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        preset: Option<String>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Solution file to write; the manifest goes beside it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute a solution's metrics and check them against the stored ones.
    Evaluate {
        solution: PathBuf,
        /// Also write a report (and manifest) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-evaluate a solution with band-limited pulse shapers.
    Sweep {
        solution: PathBuf,
        /// Smallest band; default is the loaded span rounded up to even.
        #[arg(long)]
        band_min: Option<usize>,
        /// Largest band; default is the full grid.
        #[arg(long)]
        band_max: Option<usize>,
        #[arg(long, default_value_t = 2)]
        band_step: usize,
        /// CSV: band_size,fidelity,probability plus an effective_modes row.
        #[arg(long)]
        out: PathBuf,
    },
    /// Power spectra of the modulator drives.
    Spectrum {
        solution: PathBuf,
        /// Physical mode spacing; the default of 1 reports rates in units
        /// of the spacing.
        #[arg(long, default_value_t = 1.0)]
        mode_spacing_hz: f64,
        /// CSV: eom,harmonic,power_db. A `.summary.csv` goes beside it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the closed-form two-photon lift with brute-force Fock
    /// evaluation on random unitaries.
    OracleCheck {
        #[arg(long, default_value_t = 8)]
        modes: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome> {
    let common = Common {
        threads: cli.threads,
    };
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| spectral_gates_cli::CliError::Usage(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Synthesize {
            config,
            preset,
            seed,
            out,
        } => commands::synthesize(
            &SynthesizeArgs {
                config,
                preset,
                seed,
                out,
            },
            &common,
        ),
        Command::Evaluate { solution, out } => {
            commands::evaluate(&solution, out.as_deref(), &common).map(|(o, _)| o)
        }
        Command::Sweep {
            solution,
            band_min,
            band_max,
            band_step,
            out,
        } => commands::sweep(
            &SweepArgs {
                solution,
                band_min,
                band_max,
                band_step,
                out,
            },
            &common,
        ),
        Command::Spectrum {
            solution,
            mode_spacing_hz,
            out,
        } => commands::spectrum(
            &SpectrumArgs {
                solution,
                mode_spacing_hz,
                out,
            },
            &common,
        ),
        Command::OracleCheck {
            modes,
            trials,
            seed,
            out,
        } => commands::oracle(modes, trials, seed, out.as_deref(), &common),
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which here means infeasible.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            ExitCode::from(outcome.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
