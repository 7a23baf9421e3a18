//! Atomic file output and CSV emission.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};
use spectral_gates::experiments::{BandwidthCurve, DriveSpectrum};
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

/// Writes `bytes` to a temporary file beside `path`, then renames it over
/// `path`, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes)
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner()
        .map_err(|e| CliError::Usage(format!("csv buffer: {e}")))
}

/// `band_size,fidelity,probability`, then an `effective_modes` footer row
/// whose middle field is empty when no band reached the threshold.
pub fn sweep_csv(curve: &BandwidthCurve) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["band_size", "fidelity", "probability"])?;
    for ((b, f), p) in curve
        .band_sizes
        .iter()
        .zip(&curve.fidelities)
        .zip(&curve.probabilities)
    {
        w.write_record([b.to_string(), f.to_string(), p.to_string()])?;
    }
    let eff = curve
        .effective_modes
        .map(|e| e.to_string())
        .unwrap_or_default();
    w.write_record(["effective_modes".to_string(), eff, String::new()])?;
    finish(w)
}

/// `eom,harmonic,power_db`, one row per harmonic of each modulator.
pub fn spectrum_csv(spectra: &[DriveSpectrum]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["eom", "harmonic", "power_db"])?;
    for (i, s) in spectra.iter().enumerate() {
        for (k, db) in s.harmonic_index.iter().zip(&s.power_db) {
            w.write_record([(i + 1).to_string(), k.to_string(), db.to_string()])?;
        }
    }
    finish(w)
}

/// `eom,bandwidth_10db,nyquist_rate_hz`, then an `all` row with the widest
/// drive and the resulting sampling rate.
pub fn spectrum_summary_csv(spectra: &[DriveSpectrum], mode_spacing_hz: f64) -> Result<Vec<u8>> {
    use spectral_gates::experiments::sampling_rate;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["eom", "bandwidth_10db", "nyquist_rate_hz"])?;
    for (i, s) in spectra.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            s.bandwidth_10db.to_string(),
            sampling_rate(s.bandwidth_10db, mode_spacing_hz).to_string(),
        ])?;
    }
    let widest = spectra.iter().map(|s| s.bandwidth_10db).max().unwrap_or(0);
    w.write_record([
        "all".to_string(),
        widest.to_string(),
        sampling_rate(widest, mode_spacing_hz).to_string(),
    ])?;
    finish(w)
}
