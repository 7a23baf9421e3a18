//! One function per CLI command. Each returns the process exit status.

use std::path::{Path, PathBuf};
use std::time::SystemTime;

use serde::Serialize;
use spectral_gates::experiments::{band_range, bandwidth_sweep, solution_spectra};
use spectral_gates::fock::oracle_check;
use spectral_gates::optimize::optimize_with_report;
use spectral_gates::{verify_solution, Metrics, Solution};

use crate::error::{CliError, Result};
use crate::formats::{self, hex, read_solution, ConfigFile};
use crate::manifest::{FileDigest, RunManifest};
use crate::output::{spectrum_csv, spectrum_summary_csv, sweep_csv, write_atomic};

/// Largest deviation the oracle check tolerates.
pub const ORACLE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
}

impl Status {
    pub fn from_feasible(feasible: bool) -> Self {
        if feasible {
            Self::Feasible
        } else {
            Self::Infeasible
        }
    }

    pub fn code(self) -> i32 {
        match self {
            Self::Feasible => 0,
            Self::Infeasible => 2,
        }
    }
}

/// What a command reports: its exit status and a summary for the console.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
}

/// Flags shared by every command.
#[derive(Clone, Debug, Default)]
pub struct Common {
    pub threads: Option<usize>,
}

fn write_output(path: &Path, bytes: &[u8], manifest: &mut RunManifest) -> Result<()> {
    write_atomic(path, bytes)?;
    manifest.outputs.push(FileDigest::of_bytes(path, bytes));
    Ok(())
}

pub struct SynthesizeArgs {
    pub config: Option<PathBuf>,
    pub preset: Option<String>,
    pub seed: Option<u64>,
    pub out: PathBuf,
}

pub fn synthesize(args: &SynthesizeArgs, common: &Common) -> Result<Outcome> {
    let started = SystemTime::now();
    let mut manifest = RunManifest::new("synthesize", started);
    let mut cfg = match (&args.config, &args.preset) {
        (Some(path), None) => {
            let text = formats::read_text(path)?;
            manifest
                .inputs
                .push(FileDigest::of_bytes(path, text.as_bytes()));
            ConfigFile::parse(&text, path)?
        }
        (None, Some(name)) => formats::preset(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown preset `{name}` (known: {})",
                formats::PRESETS.join(", ")
            ))
        })?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --config or --preset".into(),
            ))
        }
    };
    if let Some(seed) = args.seed {
        cfg.optimizer.seed = Some(seed);
    }
    let label = args.config.clone().unwrap_or_else(|| {
        PathBuf::from(format!("preset:{}", args.preset.as_deref().unwrap_or("")))
    });
    let run = cfg.resolve(&label)?;
    manifest.seed = Some(run.optimizer.seed);
    manifest.threads = common.threads;
    manifest.set_config(&run.resolved)?;

    let report = optimize_with_report(&run.spec, &run.optimizer)?;
    let sol = report.solution;
    let text = formats::solution_to_string(&sol)?;
    write_output(&args.out, text.as_bytes(), &mut manifest)?;
    let status = Status::from_feasible(sol.feasible);
    manifest.exit_code = status.code();
    manifest.finish(started, &args.out)?;

    let summary = format!(
        "{} R={} M={}: F = {:.6}, P = {:.6}, {} (restart {} of {}, {} feasible)",
        sol.spec.target().label(),
        sol.network.stages(),
        sol.network.modes(),
        sol.metrics.fidelity,
        sol.metrics.probability,
        if sol.feasible {
            "feasible"
        } else {
            "INFEASIBLE"
        },
        sol.provenance.restart,
        sol.provenance.restarts_run,
        sol.provenance.feasible_restarts,
    );
    Ok(Outcome { status, summary })
}

#[derive(Serialize)]
struct EvaluateReport {
    solution: String,
    fidelity: String,
    fidelity_decimal: f64,
    probability: String,
    probability_decimal: f64,
    feasible: bool,
}

#[derive(Serialize)]
struct PathFlags<'a> {
    solution: &'a Path,
}

fn load(path: &Path, manifest: &mut RunManifest) -> Result<Solution> {
    manifest.inputs.push(FileDigest::of_file(path)?);
    read_solution(path)
}

/// Recomputes the metrics of a stored solution and checks them.
pub fn evaluate(
    solution: &Path,
    out: Option<&Path>,
    common: &Common,
) -> Result<(Outcome, Metrics)> {
    let started = SystemTime::now();
    let mut manifest = RunManifest::new("evaluate", started);
    manifest.threads = common.threads;
    manifest.set_config(&PathFlags { solution })?;
    let sol = load(solution, &mut manifest)?;
    let fresh = verify_solution(&sol)?;
    let status = Status::from_feasible(sol.feasible);
    let summary = format!(
        "F = {:.12}\nP = {:.12}\nfeasible = {}",
        fresh.fidelity, fresh.probability, sol.feasible
    );
    if let Some(out) = out {
        let report = EvaluateReport {
            solution: solution.display().to_string(),
            fidelity: hex(fresh.fidelity),
            fidelity_decimal: fresh.fidelity,
            probability: hex(fresh.probability),
            probability_decimal: fresh.probability,
            feasible: sol.feasible,
        };
        let text = toml::to_string(&report)
            .map_err(|e| CliError::Usage(format!("serializing report: {e}")))?;
        write_output(out, text.as_bytes(), &mut manifest)?;
        manifest.exit_code = status.code();
        manifest.finish(started, out)?;
    }
    Ok((Outcome { status, summary }, fresh))
}

pub struct SweepArgs {
    pub solution: PathBuf,
    pub band_min: Option<usize>,
    pub band_max: Option<usize>,
    pub band_step: usize,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct SweepFlags<'a> {
    solution: &'a Path,
    band_min: usize,
    band_max: usize,
    band_step: usize,
}

pub fn sweep(args: &SweepArgs, common: &Common) -> Result<Outcome> {
    let started = SystemTime::now();
    let mut manifest = RunManifest::new("sweep", started);
    manifest.threads = common.threads;
    let sol = load(&args.solution, &mut manifest)?;
    let loaded = sol.spec.loaded_modes();
    let span = loaded.iter().max().unwrap() - loaded.iter().min().unwrap() + 1;
    let band_min = args.band_min.unwrap_or(span + span % 2);
    let band_max = args.band_max.unwrap_or(sol.spec.modes());
    manifest.set_config(&SweepFlags {
        solution: &args.solution,
        band_min,
        band_max,
        band_step: args.band_step,
    })?;
    let sizes = band_range(band_min, band_max, args.band_step)?;
    let curve = bandwidth_sweep(&sol, &sizes)?;
    write_output(&args.out, &sweep_csv(&curve)?, &mut manifest)?;
    manifest.finish(started, &args.out)?;
    let summary = match curve.effective_modes {
        Some(n) => format!("effective modes: {n}"),
        None => format!("effective modes: not reached within {band_max} modes"),
    };
    Ok(Outcome {
        status: Status::Feasible,
        summary,
    })
}

pub struct SpectrumArgs {
    pub solution: PathBuf,
    pub mode_spacing_hz: f64,
    pub out: PathBuf,
}

#[derive(Serialize)]
struct SpectrumFlags<'a> {
    solution: &'a Path,
    mode_spacing_hz: f64,
}

/// `spectrum.csv` → `spectrum.summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    out.with_extension("summary.csv")
}

pub fn spectrum(args: &SpectrumArgs, common: &Common) -> Result<Outcome> {
    if !(args.mode_spacing_hz > 0.0 && args.mode_spacing_hz.is_finite()) {
        return Err(CliError::Usage(format!(
            "--mode-spacing-hz must be positive, got {}",
            args.mode_spacing_hz
        )));
    }
    let started = SystemTime::now();
    let mut manifest = RunManifest::new("spectrum", started);
    manifest.threads = common.threads;
    manifest.set_config(&SpectrumFlags {
        solution: &args.solution,
        mode_spacing_hz: args.mode_spacing_hz,
    })?;
    let sol = load(&args.solution, &mut manifest)?;
    let spectra = solution_spectra(&sol)?;
    write_output(&args.out, &spectrum_csv(&spectra)?, &mut manifest)?;
    let summary = spectrum_summary_csv(&spectra, args.mode_spacing_hz)?;
    write_output(&summary_path(&args.out), &summary, &mut manifest)?;
    manifest.finish(started, &args.out)?;
    Ok(Outcome {
        status: Status::Feasible,
        summary: String::from_utf8_lossy(&summary).trim_end().to_string(),
    })
}

#[derive(Serialize)]
struct OracleFlags {
    modes: usize,
    trials: usize,
}

#[derive(Serialize)]
struct OracleOutput {
    modes: usize,
    trials: usize,
    seed: u64,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
}

pub fn oracle(
    modes: usize,
    trials: usize,
    seed: u64,
    out: Option<&Path>,
    common: &Common,
) -> Result<Outcome> {
    let started = SystemTime::now();
    let report = oracle_check(modes, trials, seed)?;
    let passed = report.max_deviation <= ORACLE_TOL;
    let summary = format!(
        "{} trials at M = {}: max deviation {:.3e} ({})",
        report.trials,
        report.modes,
        report.max_deviation,
        if passed { "ok" } else { "FAILED" }
    );
    if let Some(out) = out {
        let mut manifest = RunManifest::new("oracle-check", started);
        manifest.threads = common.threads;
        manifest.seed = Some(seed);
        manifest.set_config(&OracleFlags { modes, trials })?;
        let text = toml::to_string(&OracleOutput {
            modes,
            trials,
            seed,
            max_deviation: report.max_deviation,
            tolerance: ORACLE_TOL,
            passed,
        })
        .map_err(|e| CliError::Usage(format!("serializing report: {e}")))?;
        write_output(out, text.as_bytes(), &mut manifest)?;
        manifest.exit_code = if passed { 0 } else { 1 };
        manifest.finish(started, out)?;
    }
    if passed {
        Ok(Outcome {
            status: Status::Feasible,
            summary,
        })
    } else {
        Err(CliError::Check(format!(
            "lift and brute-force oracle differ by {:.3e} > {ORACLE_TOL:e}",
            report.max_deviation
        )))
    }
}
