//! Mode transformations of alternating pulse-shaper / phase-modulator chains.
//!
//! A pulse shaper is a diagonal unitary in the frequency basis. A phase
//! modulator (EOM) is a diagonal unitary in the time basis, which the DFT
//! matrix `F[n][k] = M^{-1/2} exp(+2πi·n·k/M)` carries into a circulant
//! unitary `F·D̃·F†` on the frequency modes.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Position of a frequency bin inside the truncated `M`-mode grid.
pub type ModeIndex = usize;

const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseKind {
    /// One phase per frequency mode (pulse shaper).
    Spectral,
    /// One phase per uniform time sample of a drive period (EOM).
    Temporal,
}

/// Real phases in radians. Values are stored unwrapped.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseVector {
    kind: PhaseKind,
    values: Vec<f64>,
}

impl PhaseVector {
    pub fn new(kind: PhaseKind, values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite phase {bad}")));
        }
        Ok(Self { kind, values })
    }

    pub fn spectral(values: Vec<f64>) -> Result<Self> {
        Self::new(PhaseKind::Spectral, values)
    }

    pub fn temporal(values: Vec<f64>) -> Result<Self> {
        Self::new(PhaseKind::Temporal, values)
    }

    pub fn zeros(kind: PhaseKind, len: usize) -> Self {
        Self {
            kind,
            values: vec![0.0; len],
        }
    }

    pub fn kind(&self) -> PhaseKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Phases reduced to `[0, 2π)`, for reporting only.
    pub fn canonical(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.rem_euclid(TAU)).collect()
    }

    /// `exp(i·φ)` for every entry.
    pub fn phasors(&self) -> Vec<Complex64> {
        self.values.iter().map(|&v| Complex64::cis(v)).collect()
    }

    fn expect_kind(&self, kind: PhaseKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: kind,
                found: self.kind,
            })
        }
    }
}

/// An `M×M` unitary acting on mode annihilation operators.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary(CMatrix);

impl ModeUnitary {
    /// Wraps a matrix after checking `U†U = I` to within `tol` (max-norm).
    pub fn from_matrix(matrix: CMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "mode unitary must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let err = unitarity_error(&matrix);
        if err > tol {
            return Err(Error::ShapeMismatch(format!(
                "matrix is not unitary: max |U†U - I| = {err:e}"
            )));
        }
        Ok(Self(matrix))
    }

    pub fn identity(m: usize) -> Self {
        Self(CMatrix::identity(m, m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, row: ModeIndex, col: ModeIndex) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.0)
    }

    fn compose(&self, rhs: &ModeUnitary) -> ModeUnitary {
        ModeUnitary(&self.0 * &rhs.0)
    }
}

/// `max |U†U - I|` over all entries.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    gram.iter()
        .enumerate()
        .map(|(idx, z)| {
            let (r, c) = (idx % gram.nrows(), idx / gram.nrows());
            let target = if r == c { 1.0 } else { 0.0 };
            (z - target).norm()
        })
        .fold(0.0, f64::max)
}

/// Inclusive range of modes `[lo, hi]` that survive band-pass filtering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Band {
    lo: ModeIndex,
    hi: ModeIndex,
}

impl Band {
    pub fn new(lo: ModeIndex, hi: ModeIndex, modes: usize) -> Result<Self> {
        if lo > hi || hi >= modes {
            return Err(Error::InvalidBand {
                lo,
                hi,
                modes,
                reason: "need lo <= hi < M".into(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn full(modes: usize) -> Self {
        Self {
            lo: 0,
            hi: modes.saturating_sub(1),
        }
    }

    pub fn lo(&self) -> ModeIndex {
        self.lo
    }

    pub fn hi(&self) -> ModeIndex {
        self.hi
    }

    pub fn width(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, mode: ModeIndex) -> bool {
        (self.lo..=self.hi).contains(&mode)
    }

    pub fn is_full(&self, modes: usize) -> bool {
        self.lo == 0 && self.hi + 1 >= modes
    }
}

/// Phases of an `R`-stage shaper/EOM chain on `M` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    modes: usize,
    shapers: Vec<PhaseVector>,
    eoms: Vec<PhaseVector>,
}

impl NetworkConfig {
    pub fn new(modes: usize, shapers: Vec<PhaseVector>, eoms: Vec<PhaseVector>) -> Result<Self> {
        if modes < 2 {
            return Err(Error::InvalidConfig(format!("need M >= 2, got {modes}")));
        }
        if shapers.is_empty() || shapers.len() != eoms.len() {
            return Err(Error::InvalidConfig(format!(
                "need R >= 1 matched pairs, got {} shapers and {} EOMs",
                shapers.len(),
                eoms.len()
            )));
        }
        for (stage, (s, e)) in shapers.iter().zip(&eoms).enumerate() {
            s.expect_kind(PhaseKind::Spectral)?;
            e.expect_kind(PhaseKind::Temporal)?;
            if s.len() != modes || e.len() != modes {
                return Err(Error::InvalidConfig(format!(
                    "stage {stage}: phase vectors have lengths {} and {}, expected {modes}",
                    s.len(),
                    e.len()
                )));
            }
        }
        Ok(Self {
            modes,
            shapers,
            eoms,
        })
    }

    pub fn zeros(modes: usize, stages: usize) -> Result<Self> {
        Self::new(
            modes,
            vec![PhaseVector::zeros(PhaseKind::Spectral, modes); stages],
            vec![PhaseVector::zeros(PhaseKind::Temporal, modes); stages],
        )
    }

    /// Rebuilds a config from the flat layout produced by [`Self::to_params`].
    pub fn from_params(modes: usize, stages: usize, params: &[f64]) -> Result<Self> {
        if params.len() != 2 * stages * modes {
            return Err(Error::InvalidConfig(format!(
                "expected {} parameters, got {}",
                2 * stages * modes,
                params.len()
            )));
        }
        let mut shapers = Vec::with_capacity(stages);
        let mut eoms = Vec::with_capacity(stages);
        for chunk in params.chunks(2 * modes) {
            shapers.push(PhaseVector::spectral(chunk[..modes].to_vec())?);
            eoms.push(PhaseVector::temporal(chunk[modes..].to_vec())?);
        }
        Self::new(modes, shapers, eoms)
    }

    /// Flat parameter vector `[D_1, D̃_1, D_2, D̃_2, ...]`, `2RM` entries.
    pub fn to_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for (s, e) in self.shapers.iter().zip(&self.eoms) {
            out.extend_from_slice(s.values());
            out.extend_from_slice(e.values());
        }
        out
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn stages(&self) -> usize {
        self.shapers.len()
    }

    pub fn param_count(&self) -> usize {
        2 * self.stages() * self.modes
    }

    pub fn shapers(&self) -> &[PhaseVector] {
        &self.shapers
    }

    pub fn eoms(&self) -> &[PhaseVector] {
        &self.eoms
    }

    pub fn shaper_mut(&mut self, stage: usize) -> &mut PhaseVector {
        &mut self.shapers[stage]
    }

    pub fn eom_mut(&mut self, stage: usize) -> &mut PhaseVector {
        &mut self.eoms[stage]
    }

    /// Re-expresses this network on a larger grid of `modes` bins, with old
    /// mode `n` landing on `n + offset`.
    ///
    /// New shaper pixels get zero phase. Drives are resampled by trigonometric
    /// interpolation of the unwrapped phase samples.
    pub fn embed(&self, modes: usize, offset: usize) -> Result<Self> {
        if modes < self.modes || offset + self.modes > modes {
            return Err(Error::InvalidConfig(format!(
                "cannot embed {} modes at offset {offset} into {modes}",
                self.modes
            )));
        }
        let shapers = self
            .shapers
            .iter()
            .map(|s| {
                let mut v = vec![0.0; modes];
                v[offset..offset + self.modes].copy_from_slice(s.values());
                PhaseVector::spectral(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let eoms = self
            .eoms
            .iter()
            .map(|e| PhaseVector::temporal(resample_periodic(&unwrap(e.values()), modes)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(modes, shapers, eoms)
    }
}

/// Removes jumps larger than π between consecutive samples.
pub fn unwrap(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut shift = 0.0_f64;
    for (i, &v) in values.iter().enumerate() {
        if i > 0 {
            let delta: f64 = v + shift - out[i - 1];
            shift -= TAU * (delta / TAU).round();
        }
        out.push(v + shift);
    }
    out
}

/// Trigonometric interpolation of one period of samples onto `len` points.
///
/// A net linear ramp across the period (winding) is removed before the
/// interpolation and added back afterwards.
fn resample_periodic(samples: &[f64], len: usize) -> Vec<f64> {
    let n = samples.len();
    if n == len {
        return samples.to_vec();
    }
    // Number of whole turns that makes the step from the last sample back
    // to the first one smallest.
    let winding = ((samples[n - 1] - samples[0]) / TAU).round();
    let ramp = |t: f64| TAU * winding * t;
    let mut buf: Vec<Complex64> = samples
        .iter()
        .enumerate()
        .map(|(j, &v)| Complex64::new(v - ramp(j as f64 / n as f64), 0.0))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);

    let mut spec = vec![Complex64::new(0.0, 0.0); len];
    let half = n / 2;
    for k in 0..n {
        let coeff = buf[k] / n as f64;
        if n.is_multiple_of(2) && k == half {
            // Split the Nyquist bin symmetrically.
            spec[half] += coeff * 0.5;
            spec[len - half] += coeff * 0.5;
        } else if k < half || (n % 2 == 1 && k == half) {
            spec[k] += coeff;
        } else {
            spec[len - (n - k)] += coeff;
        }
    }
    planner.plan_fft_inverse(len).process(&mut spec);
    spec.iter()
        .enumerate()
        .map(|(j, z)| z.re + ramp(j as f64 / len as f64))
        .collect()
}

/// DFT matrix `F[n][k] = M^{-1/2} exp(+2πi·n·k/M)`.
pub fn dft_matrix(modes: usize) -> Result<ModeUnitary> {
    if modes < 1 {
        return Err(Error::InvalidDimension(modes));
    }
    let scale = 1.0 / (modes as f64).sqrt();
    Ok(ModeUnitary(CMatrix::from_fn(modes, modes, |n, k| {
        // Reduce n·k mod M first so the angle stays small and exact.
        let nk = (n * k) % modes;
        Complex64::from_polar(scale, TAU * nk as f64 / modes as f64)
    })))
}

/// Diagonal unitary `diag(exp(i·φ_n))` of a line-by-line pulse shaper.
pub fn shaper_unitary(phases: &PhaseVector) -> Result<ModeUnitary> {
    phases.expect_kind(PhaseKind::Spectral)?;
    if phases.is_empty() {
        return Err(Error::InvalidDimension(0));
    }
    let diag = nalgebra::DVector::from_vec(phases.phasors());
    Ok(ModeUnitary(CMatrix::from_diagonal(&diag)))
}

/// Fourier coefficients `c_k` of `exp(i·φ(t))` for one drive period.
///
/// Stored by `k mod M`; the EOM maps `b_n = Σ_k c_{n-k} a_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingCoefficients {
    coeffs: Vec<Complex64>,
}

impl CouplingCoefficients {
    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_k` for any integer `k`, read cyclically.
    pub fn get(&self, k: i64) -> Complex64 {
        let m = self.coeffs.len() as i64;
        self.coeffs[k.rem_euclid(m) as usize]
    }

    /// `(k, c_k)` for `k` in `(-M/2, M/2]`, ascending.
    pub fn centered(&self) -> Vec<(i64, Complex64)> {
        let m = self.coeffs.len() as i64;
        let lo = -((m - 1) / 2);
        let hi = m / 2;
        (lo..=hi).map(|k| (k, self.get(k))).collect()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }
}

/// `c_k = (1/M) Σ_j exp(i·φ(t_j)) · exp(+2πi·k·j/M)`.
pub fn coupling_coefficients(phases: &PhaseVector) -> Result<CouplingCoefficients> {
    phases.expect_kind(PhaseKind::Temporal)?;
    let m = phases.len();
    if m == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut buf = phases.phasors();
    // rustfft's inverse transform carries the +i sign.
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    Ok(CouplingCoefficients {
        coeffs: buf.into_iter().map(|z| z * scale).collect(),
    })
}

/// Circulant unitary `F·D̃·F†` of a phase modulator; entry `(m, n)` is `c_{m-n}`.
pub fn eom_unitary(phases: &PhaseVector) -> Result<ModeUnitary> {
    let c = coupling_coefficients(phases)?;
    let m = c.modes();
    Ok(ModeUnitary(CMatrix::from_fn(m, m, |row, col| {
        c.coeffs[(row + m - col) % m]
    })))
}

/// `V = (F D̃_R F† D_R) ··· (F D̃_1 F† D_1)`.
pub fn compose_network(cfg: &NetworkConfig) -> Result<ModeUnitary> {
    let mut v = ModeUnitary::identity(cfg.modes());
    for (s, e) in cfg.shapers().iter().zip(cfg.eoms()) {
        let stage = eom_unitary(e)?.compose(&shaper_unitary(s)?);
        v = stage.compose(&v);
    }
    debug_assert!(v.unitarity_error() < UNITARY_TOL);
    Ok(v)
}

/// Zeroes every row and column outside `band`.
pub fn band_project(u: &CMatrix, band: Band) -> Result<CMatrix> {
    if band.hi() >= u.nrows() || band.hi() >= u.ncols() {
        return Err(Error::InvalidBand {
            lo: band.lo(),
            hi: band.hi(),
            modes: u.nrows(),
            reason: "band exceeds matrix".into(),
        });
    }
    Ok(CMatrix::from_fn(u.nrows(), u.ncols(), |r, c| {
        if band.contains(r) && band.contains(c) {
            u[(r, c)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Dense reference for the band-limited chain
/// `P·(F D̃_R F†)·P·D_R ··· P·(F D̃_1 F†)·P·D_1·P`.
pub fn compose_network_banded(cfg: &NetworkConfig, band: Band) -> Result<CMatrix> {
    let mut v = band_project(&CMatrix::identity(cfg.modes(), cfg.modes()), band)?;
    for (s, e) in cfg.shapers().iter().zip(cfg.eoms()) {
        let after_shaper = band_project(&(shaper_unitary(s)?.into_matrix() * v), band)?;
        v = band_project(&(eom_unitary(e)?.into_matrix() * after_shaper), band)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_phases(kind: PhaseKind, m: usize, rng: &mut ChaCha8Rng) -> PhaseVector {
        PhaseVector::new(kind, (0..m).map(|_| rng.gen_range(0.0..TAU)).collect()).unwrap()
    }

    fn random_config(m: usize, r: usize, rng: &mut ChaCha8Rng) -> NetworkConfig {
        let shapers = (0..r)
            .map(|_| random_phases(PhaseKind::Spectral, m, rng))
            .collect();
        let eoms = (0..r)
            .map(|_| random_phases(PhaseKind::Temporal, m, rng))
            .collect();
        NetworkConfig::new(m, shapers, eoms).unwrap()
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn dft_small_cases() {
        let f1 = dft_matrix(1).unwrap();
        assert_eq!(f1.get(0, 0), Complex64::new(1.0, 0.0));

        let f2 = dft_matrix(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = CMatrix::from_row_slice(2, 2, &[h.into(), h.into(), h.into(), (-h).into()]);
        assert!(max_diff(f2.matrix(), &expected) < 1e-15);

        assert!(matches!(dft_matrix(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn dft_is_unitary() {
        for m in [1, 2, 4, 8, 16, 64, 128] {
            assert!(dft_matrix(m).unwrap().unitarity_error() < 1e-12, "M = {m}");
        }
    }

    #[test]
    fn shaper_examples() {
        let id = shaper_unitary(&PhaseVector::zeros(PhaseKind::Spectral, 5)).unwrap();
        assert!(max_diff(id.matrix(), &CMatrix::identity(5, 5)) < 1e-15);

        let flip = shaper_unitary(&PhaseVector::spectral(vec![0.0, std::f64::consts::PI]).unwrap())
            .unwrap();
        assert!((flip.get(0, 0) - 1.0).norm() < 1e-15);
        assert!((flip.get(1, 1) + 1.0).norm() < 1e-15);
        assert_eq!(flip.get(0, 1), Complex64::new(0.0, 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = shaper_unitary(&random_phases(PhaseKind::Spectral, 16, &mut rng)).unwrap();
        let b = shaper_unitary(&random_phases(PhaseKind::Spectral, 16, &mut rng)).unwrap();
        assert!(a.unitarity_error() < 1e-14);
        let ab = a.matrix() * b.matrix();
        let ba = b.matrix() * a.matrix();
        assert!(max_diff(&ab, &ba) < 1e-15);

        let wrong = PhaseVector::zeros(PhaseKind::Temporal, 4);
        assert!(matches!(
            shaper_unitary(&wrong),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn eom_matches_dense_fourier_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [2, 5, 16, 33] {
            let phases = random_phases(PhaseKind::Temporal, m, &mut rng);
            let f = dft_matrix(m).unwrap().into_matrix();
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases.phasors()));
            let dense = &f * d * f.adjoint();
            let fast = eom_unitary(&phases).unwrap();
            assert!(max_diff(&dense, fast.matrix()) < 1e-12, "M = {m}");
        }
    }

    #[test]
    fn eom_constant_drive_is_global_phase() {
        let zero = eom_unitary(&PhaseVector::zeros(PhaseKind::Temporal, 8)).unwrap();
        assert!(max_diff(zero.matrix(), &CMatrix::identity(8, 8)) < 1e-15);

        let c = 0.7;
        let u = eom_unitary(&PhaseVector::temporal(vec![c; 8]).unwrap()).unwrap();
        let expected = CMatrix::identity(8, 8) * Complex64::cis(c);
        assert!(max_diff(u.matrix(), &expected) < 1e-15);

        let cc = coupling_coefficients(&PhaseVector::temporal(vec![c; 8]).unwrap()).unwrap();
        assert!((cc.get(0) - Complex64::cis(c)).norm() < 1e-15);
        assert!(cc
            .centered()
            .iter()
            .filter(|(k, _)| *k != 0)
            .all(|(_, z)| z.norm() < 1e-15));
    }

    #[test]
    fn eom_is_circulant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = 24;
        let u = eom_unitary(&random_phases(PhaseKind::Temporal, m, &mut rng)).unwrap();
        for r in 0..m {
            for c in 0..m {
                assert!((u.get(r, c) - u.get((r + 1) % m, (c + 1) % m)).norm() < 1e-12);
            }
        }
        assert!(u.unitarity_error() < 1e-12);
    }

    #[test]
    fn coupling_relation_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = 32;
        for _ in 0..20 {
            let c =
                coupling_coefficients(&random_phases(PhaseKind::Temporal, m, &mut rng)).unwrap();
            for a in 0..m as i64 {
                for b in 0..m as i64 {
                    let sum: Complex64 = (0..m as i64)
                        .map(|k| c.get(a - k).conj() * c.get(b - k))
                        .sum();
                    let target = if a == b { 1.0 } else { 0.0 };
                    assert!((sum - target).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn centered_index_range() {
        let c = coupling_coefficients(&PhaseVector::zeros(PhaseKind::Temporal, 8)).unwrap();
        let ks: Vec<i64> = c.centered().iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![-3, -2, -1, 0, 1, 2, 3, 4]);
        let c = coupling_coefficients(&PhaseVector::zeros(PhaseKind::Temporal, 7)).unwrap();
        let ks: Vec<i64> = c.centered().iter().map(|(k, _)| *k).collect();
        assert_eq!(ks, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn compose_examples() {
        let id = compose_network(&NetworkConfig::zeros(6, 1).unwrap()).unwrap();
        assert!(max_diff(id.matrix(), &CMatrix::identity(6, 6)) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut cfg = NetworkConfig::zeros(8, 2).unwrap();
        *cfg.shaper_mut(0) = random_phases(PhaseKind::Spectral, 8, &mut rng);
        *cfg.shaper_mut(1) = random_phases(PhaseKind::Spectral, 8, &mut rng);
        let v = compose_network(&cfg).unwrap();
        let expected = shaper_unitary(&cfg.shapers()[1]).unwrap().into_matrix()
            * shaper_unitary(&cfg.shapers()[0]).unwrap().into_matrix();
        assert!(max_diff(v.matrix(), &expected) < 1e-12);
    }

    #[test]
    fn compose_applies_first_stage_first() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let cfg = random_config(6, 2, &mut rng);
        let stage = |i: usize| {
            eom_unitary(&cfg.eoms()[i]).unwrap().into_matrix()
                * shaper_unitary(&cfg.shapers()[i]).unwrap().into_matrix()
        };
        let expected = stage(1) * stage(0);
        assert!(max_diff(compose_network(&cfg).unwrap().matrix(), &expected) < 1e-12);
    }

    #[test]
    fn compose_is_unitary_at_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (m, r) in [(16, 1), (16, 3), (64, 2), (128, 4)] {
            let v = compose_network(&random_config(m, r, &mut rng)).unwrap();
            assert!(v.unitarity_error() < 1e-9, "M = {m}, R = {r}");
        }
    }

    #[test]
    fn global_spectral_shift_is_global_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let cfg = random_config(16, 3, &mut rng);
        let mut shifted = cfg.clone();
        for v in shifted.shaper_mut(1).values_mut() {
            *v += 1.234;
        }
        let a = compose_network(&cfg).unwrap();
        let b = compose_network(&shifted).unwrap();
        for (x, y) in a.matrix().iter().zip(b.matrix().iter()) {
            assert!((x.norm() - y.norm()).abs() < 1e-12);
            assert!((x * Complex64::cis(1.234) - y).norm() < 1e-12);
        }
    }

    #[test]
    fn config_validation() {
        let s = PhaseVector::zeros(PhaseKind::Spectral, 4);
        let e = PhaseVector::zeros(PhaseKind::Temporal, 3);
        assert!(matches!(
            NetworkConfig::new(4, vec![s.clone()], vec![e]),
            Err(Error::InvalidConfig(_))
        ));
        assert!(NetworkConfig::new(4, vec![], vec![]).is_err());
        let swapped = NetworkConfig::new(
            4,
            vec![PhaseVector::zeros(PhaseKind::Temporal, 4)],
            vec![PhaseVector::zeros(PhaseKind::Temporal, 4)],
        );
        assert!(matches!(swapped, Err(Error::KindMismatch { .. })));
        assert!(PhaseVector::spectral(vec![f64::NAN]).is_err());
    }

    #[test]
    fn params_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cfg = random_config(5, 3, &mut rng);
        let back = NetworkConfig::from_params(5, 3, &cfg.to_params()).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn band_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = compose_network(&random_config(8, 2, &mut rng)).unwrap();
        let full = band_project(v.matrix(), Band::full(8)).unwrap();
        assert_eq!(&full, v.matrix());

        let band = Band::new(2, 5, 8).unwrap();
        let p = band_project(&CMatrix::identity(8, 8), band).unwrap();
        for i in 0..8 {
            let expected = if (2..=5).contains(&i) { 1.0 } else { 0.0 };
            assert_eq!(p[(i, i)].re, expected);
        }

        let cut = band_project(v.matrix(), band).unwrap();
        let svd = cut.svd(false, false);
        assert!(svd.singular_values.iter().all(|&s| s <= 1.0 + 1e-12));

        assert!(Band::new(3, 2, 8).is_err());
        assert!(Band::new(0, 8, 8).is_err());
    }

    #[test]
    fn banded_network_with_full_band_is_unfiltered() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let cfg = random_config(12, 3, &mut rng);
        let a = compose_network_banded(&cfg, Band::full(12)).unwrap();
        assert!(max_diff(&a, compose_network(&cfg).unwrap().matrix()) < 1e-12);
    }

    #[test]
    fn unwrap_removes_jumps() {
        let wrapped: Vec<f64> = (0..40).map(|j| (0.4 * j as f64).rem_euclid(TAU)).collect();
        let un = unwrap(&wrapped);
        for w in un.windows(2) {
            assert!((w[1] - w[0] - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn resampling_reproduces_band_limited_drive() {
        let drive = |m: usize| -> Vec<f64> {
            (0..m)
                .map(|j| {
                    let t = TAU * j as f64 / m as f64;
                    0.8 * t.sin() + 0.3 * (3.0 * t + 0.4).cos() + 2.0 * t
                })
                .collect()
        };
        let up = resample_periodic(&drive(16), 64);
        for (a, b) in up.iter().zip(drive(64)) {
            assert!((a - b).abs() < 1e-10);
        }
        assert_eq!(resample_periodic(&drive(8), 8), drive(8));
    }

    #[test]
    fn embed_preserves_unfiltered_identity() {
        let cfg = NetworkConfig::zeros(8, 2).unwrap();
        let big = cfg.embed(16, 4).unwrap();
        assert_eq!(big.modes(), 16);
        assert!(cfg.embed(6, 0).is_err());
        assert!(cfg.embed(16, 9).is_err());
    }
}
