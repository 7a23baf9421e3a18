//! Bandwidth sweeps over band-limited pulse shapers, and microwave spectra
//! of the modulator drives.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::GateSpec;
use crate::metrics::Metrics;
use crate::network::{Band, PhaseKind, PhaseVector};
use crate::optimize::{Evaluator, Solution};

/// Fraction of the unfiltered success probability that defines the
/// effective number of modes.
pub const EFFECTIVE_FRACTION: f64 = 0.9;

/// Harmonics within this many dB of the strongest one count toward the
/// drive bandwidth.
pub const BANDWIDTH_DB: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandwidthCurve {
    pub band_sizes: Vec<usize>,
    pub fidelities: Vec<f64>,
    pub probabilities: Vec<f64>,
    /// Metrics with no filtering at all.
    pub unfiltered: Metrics,
    /// Smallest swept band whose `P` reaches 90% of the unfiltered `P`;
    /// `None` if no swept band does.
    pub effective_modes: Option<usize>,
}

/// Band of `size` modes centred on the loaded modes of `spec`.
///
/// When the loaded span and `size` differ in parity the band cannot be
/// exactly centred; the extra mode then goes to the side holding more
/// ancillas, or the low side on a tie.
pub fn centered_band(spec: &GateSpec, size: usize) -> Result<Band> {
    let m = spec.modes();
    let loaded = spec.loaded_modes();
    let lo_mode = *loaded.iter().min().expect("a spec loads at least one mode");
    let hi_mode = *loaded.iter().max().expect("a spec loads at least one mode");
    let span = hi_mode - lo_mode + 1;
    let invalid = |lo: usize, hi: usize, reason: String| Error::InvalidBand {
        lo,
        hi,
        modes: m,
        reason,
    };
    if size < span {
        return Err(invalid(
            lo_mode,
            hi_mode,
            format!("band of {size} modes cannot hold the {span} loaded modes"),
        ));
    }
    if size > m {
        return Err(invalid(
            0,
            size - 1,
            format!("band of {size} modes exceeds M = {m}"),
        ));
    }
    let slack = size - span;
    let mut below = slack / 2;
    if slack % 2 == 1 {
        let mid2 = lo_mode + hi_mode;
        let low_side = spec.ancillas().iter().filter(|&&a| 2 * a < mid2).count();
        let high_side = spec.ancillas().iter().filter(|&&a| 2 * a > mid2).count();
        if high_side <= low_side {
            below += 1;
        }
    }
    // Slide the band back onto the grid if it would overhang an edge.
    let lo = lo_mode.saturating_sub(below).min(m - size);
    Band::new(lo, lo + size - 1, m)
}

/// `start, start + step, …` up to `stop` inclusive.
pub fn band_range(start: usize, stop: usize, step: usize) -> Result<Vec<usize>> {
    if step == 0 || start == 0 || start > stop {
        return Err(Error::InvalidConfig(format!(
            "bad band range {start}..={stop} step {step}"
        )));
    }
    Ok((start..=stop).step_by(step).collect())
}

/// Re-evaluates `sol` with every shaper, and the input and output, limited
/// to centred bands of the given sizes.
pub fn bandwidth_sweep(sol: &Solution, band_sizes: &[usize]) -> Result<BandwidthCurve> {
    if band_sizes.is_empty() {
        return Err(Error::InvalidConfig("no band sizes to sweep".into()));
    }
    if band_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(format!(
            "band sizes must be strictly increasing, got {band_sizes:?}"
        )));
    }
    let bands = band_sizes
        .iter()
        .map(|&b| centered_band(&sol.spec, b))
        .collect::<Result<Vec<_>>>()?;

    let params = sol.network.to_params();
    let mut eval = Evaluator::new(&sol.spec, sol.network.stages());
    let unfiltered = eval.metrics(&params, None)?;
    let mut fidelities = Vec::with_capacity(bands.len());
    let mut probabilities = Vec::with_capacity(bands.len());
    for band in bands {
        let m = eval.metrics(&params, Some(band))?;
        fidelities.push(m.fidelity);
        probabilities.push(m.probability);
    }
    let threshold = EFFECTIVE_FRACTION * unfiltered.probability;
    let effective_modes = band_sizes
        .iter()
        .zip(&probabilities)
        .find(|(_, &p)| p >= threshold)
        .map(|(&b, _)| b);
    Ok(BandwidthCurve {
        band_sizes: band_sizes.to_vec(),
        fidelities,
        probabilities,
        unfiltered,
        effective_modes,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveSpectrum {
    /// Harmonics `1..=M/2` of the drive period. Empty for a constant drive.
    pub harmonic_index: Vec<usize>,
    /// Power per harmonic relative to the strongest one.
    pub power_db: Vec<f64>,
    /// Highest harmonic within 10 dB of the peak; 0 for a constant drive.
    pub bandwidth_10db: usize,
}

/// Power spectrum of the phase samples themselves (not of `e^{iφ}`).
pub fn drive_spectrum(phases: &PhaseVector) -> Result<DriveSpectrum> {
    if phases.kind() != PhaseKind::Temporal {
        return Err(Error::KindMismatch {
            expected: PhaseKind::Temporal,
            found: phases.kind(),
        });
    }
    let n = phases.len();
    let mut buf: Vec<Complex64> = phases
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let power: Vec<f64> = buf[1..=n / 2].iter().map(|z| z.norm_sqr()).collect();
    let peak = power.iter().cloned().fold(0.0, f64::max);
    // Anything this far below the mean-square phase is rounding noise.
    let energy: f64 = phases.values().iter().map(|v| v * v).sum::<f64>() * n as f64;
    if peak <= 1e-24 * energy {
        return Ok(DriveSpectrum {
            harmonic_index: Vec::new(),
            power_db: Vec::new(),
            bandwidth_10db: 0,
        });
    }
    let power_db: Vec<f64> = power.iter().map(|&p| 10.0 * (p / peak).log10()).collect();
    let bandwidth_10db = power_db
        .iter()
        .rposition(|&db| db >= -BANDWIDTH_DB - 1e-9)
        .map_or(0, |i| i + 1);
    Ok(DriveSpectrum {
        harmonic_index: (1..=n / 2).collect(),
        power_db,
        bandwidth_10db,
    })
}

/// Spectrum of every modulator in the solution, in stage order.
pub fn solution_spectra(sol: &Solution) -> Result<Vec<DriveSpectrum>> {
    sol.network.eoms().iter().map(drive_spectrum).collect()
}

/// Nyquist rate for the widest drive, given the physical mode spacing.
pub fn required_sampling_rate(sol: &Solution, mode_spacing_hz: f64) -> Result<f64> {
    if !(mode_spacing_hz > 0.0 && mode_spacing_hz.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "mode spacing must be positive, got {mode_spacing_hz}"
        )));
    }
    let widest = solution_spectra(sol)?
        .iter()
        .map(|s| s.bandwidth_10db)
        .max()
        .unwrap_or(0);
    Ok(sampling_rate(widest, mode_spacing_hz))
}

/// `2 × harmonic × spacing`.
pub fn sampling_rate(harmonic: usize, mode_spacing_hz: f64) -> f64 {
    2.0 * harmonic as f64 * mode_spacing_hz
}
