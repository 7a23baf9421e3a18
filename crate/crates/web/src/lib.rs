//! Browser bindings: modulator couplings, small gate syntheses, and
//! bandwidth sweeps of the result.
//!
//! The `*_impl` functions hold the logic and return `String` errors so
//! they can be tested natively; the exported wrappers only convert errors.

use std::f64::consts::TAU;

use spectral_gates::experiments::{band_range, bandwidth_sweep, drive_spectrum};
use spectral_gates::network::coupling_coefficients;
use spectral_gates::optimize::optimize_with_report;
use spectral_gates::{GateSpec, GateTarget, OptimizeConfig, PhaseVector, Solution};
use wasm_bindgen::prelude::*;

/// Largest grid the page will optimize on; keeps a restart under a second.
pub const MAX_MODES: usize = 64;
pub const MAX_RESTARTS: usize = 64;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

/// `|c_k|²` for `k = -half..=half` under a drive `depth · sin(2πt/T)`.
pub fn couplings_impl(depth: f64, modes: usize, half: usize) -> Result<Vec<f64>, String> {
    if !depth.is_finite() {
        return Err(format!("drive depth must be finite, got {depth}"));
    }
    if modes < 2 * half + 1 {
        return Err(format!("{modes} modes cannot resolve |k| <= {half}"));
    }
    let drive: Vec<f64> = (0..modes)
        .map(|j| depth * (TAU * j as f64 / modes as f64).sin())
        .collect();
    let c = coupling_coefficients(&PhaseVector::temporal(drive).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let half = half as i64;
    Ok((-half..=half).map(|k| c.get(k).norm_sqr()).collect())
}

/// Power in each sideband `k = -half..=half` of a sinusoidally driven
/// modulator.
#[wasm_bindgen]
pub fn couplings(depth: f64, modes: usize, half: usize) -> Result<Vec<f64>, JsError> {
    couplings_impl(depth, modes, half).map_err(js)
}

/// A synthesized gate held on the wasm side.
#[wasm_bindgen]
pub struct Design {
    solution: Solution,
}

pub fn synthesize_impl(
    gate: &str,
    modes: usize,
    stages: usize,
    restarts: usize,
    seed: u64,
) -> Result<Design, String> {
    if modes > MAX_MODES {
        return Err(format!("at most {MAX_MODES} modes in the browser"));
    }
    if restarts > MAX_RESTARTS {
        return Err(format!("at most {MAX_RESTARTS} restarts in the browser"));
    }
    let target = GateTarget::parse(gate).map_err(|e| e.to_string())?;
    let spec = match target {
        GateTarget::Cz => GateSpec::cz_default(modes),
        t => GateSpec::single_qubit(modes, t),
    }
    .map_err(|e| e.to_string())?;
    let ocfg = OptimizeConfig {
        restarts,
        seed,
        ..OptimizeConfig::new(modes, stages)
    };
    let report = optimize_with_report(&spec, &ocfg).map_err(|e| e.to_string())?;
    Ok(Design {
        solution: report.solution,
    })
}

#[wasm_bindgen]
pub fn synthesize(
    gate: &str,
    modes: usize,
    stages: usize,
    restarts: usize,
    seed: u32,
) -> Result<Design, JsError> {
    synthesize_impl(gate, modes, stages, restarts, seed.into()).map_err(js)
}

impl Design {
    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    /// Flattened `[band, F, P]` triples.
    pub fn sweep_impl(&self, min: usize, max: usize, step: usize) -> Result<Vec<f64>, String> {
        let sizes = band_range(min, max, step).map_err(|e| e.to_string())?;
        let curve = bandwidth_sweep(&self.solution, &sizes).map_err(|e| e.to_string())?;
        Ok(curve
            .band_sizes
            .iter()
            .zip(&curve.fidelities)
            .zip(&curve.probabilities)
            .flat_map(|((&b, &f), &p)| [b as f64, f, p])
            .collect())
    }

    pub fn spectrum_impl(&self, stage: usize) -> Result<Vec<f64>, String> {
        let eom = self
            .solution
            .network
            .eoms()
            .get(stage)
            .ok_or_else(|| format!("no modulator {stage}"))?;
        Ok(drive_spectrum(eom).map_err(|e| e.to_string())?.power_db)
    }
}

#[wasm_bindgen]
impl Design {
    pub fn fidelity(&self) -> f64 {
        self.solution.metrics.fidelity
    }

    pub fn probability(&self) -> f64 {
        self.solution.metrics.probability
    }

    pub fn feasible(&self) -> bool {
        self.solution.feasible
    }

    pub fn stages(&self) -> usize {
        self.solution.network.stages()
    }

    pub fn modes(&self) -> usize {
        self.solution.network.modes()
    }

    /// Smallest and largest band the sweep accepts.
    pub fn band_limits(&self) -> Vec<usize> {
        let loaded = self.solution.spec.loaded_modes();
        let span = loaded.iter().max().unwrap() - loaded.iter().min().unwrap() + 1;
        vec![span, self.modes()]
    }

    /// Flattened `[band, F, P]` triples for bands `min, min + step, …, max`.
    pub fn sweep(&self, min: usize, max: usize, step: usize) -> Result<Vec<f64>, JsError> {
        self.sweep_impl(min, max, step).map_err(js)
    }

    /// Drive spectrum of modulator `stage` in dB, harmonics `1..=M/2`.
    pub fn spectrum(&self, stage: usize) -> Result<Vec<f64>, JsError> {
        self.spectrum_impl(stage).map_err(js)
    }

    /// Drive phases of modulator `stage`, one per time sample.
    pub fn drive(&self, stage: usize) -> Vec<f64> {
        self.solution
            .network
            .eoms()
            .get(stage)
            .map(|e| e.values().to_vec())
            .unwrap_or_default()
    }
}
