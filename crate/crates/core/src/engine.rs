//! FFT-based propagation of the loaded-mode columns through a shaper/EOM
//! chain, with reverse-mode gradients of any real function of the loaded
//! submatrix.
//!
//! Only the columns of `V` for the loaded modes are ever needed, so the
//! forward pass costs `O(k·R·M log M)` for `k` loaded modes instead of the
//! `O(R·M³)` dense product.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::network::{Band, CMatrix, ModeIndex};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub(crate) struct Propagator {
    modes: usize,
    stages: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    scale: f64,
    phasors: Vec<Complex64>,
    // Per column and stage: state after shaper (+mask), and time-domain
    // state after the EOM phase.
    after_shaper: Vec<Complex64>,
    after_drive: Vec<Complex64>,
    inputs: Vec<ModeIndex>,
    band: Option<Band>,
}

impl Propagator {
    pub(crate) fn new(modes: usize, stages: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(modes);
        let inverse = planner.plan_fft_inverse(modes);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            modes,
            stages,
            forward,
            inverse,
            scratch: vec![ZERO; scratch_len],
            scale: 1.0 / (modes as f64).sqrt(),
            phasors: Vec::new(),
            after_shaper: Vec::new(),
            after_drive: Vec::new(),
            inputs: Vec::new(),
            band: None,
        }
    }

    /// `x ← F†x`.
    fn spectrum_to_time(&mut self, x: &mut [Complex64]) {
        self.forward.process_with_scratch(x, &mut self.scratch);
        x.iter_mut().for_each(|z| *z *= self.scale);
    }

    /// `x ← F x`.
    fn time_to_spectrum(&mut self, x: &mut [Complex64]) {
        self.inverse.process_with_scratch(x, &mut self.scratch);
        x.iter_mut().for_each(|z| *z *= self.scale);
    }

    fn mask(band: Option<Band>, x: &mut [Complex64]) {
        if let Some(b) = band {
            x[..b.lo()].fill(ZERO);
            x[b.hi() + 1..].fill(ZERO);
        }
    }

    fn slot(&self, col: usize, stage: usize) -> std::ops::Range<usize> {
        let start = (col * self.stages + stage) * self.modes;
        start..start + self.modes
    }

    /// Propagates unit vectors at `inputs` through the chain described by
    /// flat `params` and returns `S[a][b] = V[outputs[a]][inputs[b]]`.
    ///
    /// With a band, the chain is `P·E_R·P·D_R ··· P·E_1·P·D_1·P`.
    pub(crate) fn forward(
        &mut self,
        params: &[f64],
        inputs: &[ModeIndex],
        outputs: &[ModeIndex],
        band: Option<Band>,
    ) -> Result<CMatrix> {
        let (m, r) = (self.modes, self.stages);
        if params.len() != 2 * r * m {
            return Err(Error::InvalidConfig(format!(
                "expected {} parameters, got {}",
                2 * r * m,
                params.len()
            )));
        }
        if let Some(b) = band {
            if b.hi() >= m {
                return Err(Error::InvalidBand {
                    lo: b.lo(),
                    hi: b.hi(),
                    modes: m,
                    reason: "band exceeds grid".into(),
                });
            }
        }
        self.phasors.clear();
        self.phasors
            .extend(params.iter().map(|&p| Complex64::cis(p)));
        self.inputs.clear();
        self.inputs.extend_from_slice(inputs);
        self.band = band;
        let total = inputs.len() * r * m;
        self.after_shaper.resize(total, ZERO);
        self.after_drive.resize(total, ZERO);

        let mut s = CMatrix::zeros(outputs.len(), inputs.len());
        let mut x = vec![ZERO; m];
        for (col, &input) in inputs.iter().enumerate() {
            x.fill(ZERO);
            x[input] = Complex64::new(1.0, 0.0);
            Self::mask(band, &mut x);
            for stage in 0..r {
                let base = 2 * stage * m;
                for (xi, d) in x.iter_mut().zip(&self.phasors[base..base + m]) {
                    *xi *= d;
                }
                Self::mask(band, &mut x);
                let slot = self.slot(col, stage);
                self.after_shaper[slot.clone()].copy_from_slice(&x);
                self.spectrum_to_time(&mut x);
                for (xi, d) in x.iter_mut().zip(&self.phasors[base + m..base + 2 * m]) {
                    *xi *= d;
                }
                self.after_drive[slot].copy_from_slice(&x);
                self.time_to_spectrum(&mut x);
            }
            Self::mask(band, &mut x);
            for (row, &out) in outputs.iter().enumerate() {
                s[(row, col)] = x[out];
            }
        }
        Ok(s)
    }

    /// Gradient of a real `J(S)` with respect to every phase, given the
    /// Wirtinger derivative `seed = ∂J/∂S` of the last [`Self::forward`].
    pub(crate) fn backward(&mut self, seed: &CMatrix, outputs: &[ModeIndex], grad: &mut [f64]) {
        let (m, r) = (self.modes, self.stages);
        grad.fill(0.0);
        let band = self.band;
        let mut adj = vec![ZERO; m];
        for col in 0..self.inputs.len() {
            adj.fill(ZERO);
            for (row, &out) in outputs.iter().enumerate() {
                adj[out] += seed[(row, col)];
            }
            Self::mask(band, &mut adj);
            for stage in (0..r).rev() {
                let base = 2 * stage * m;
                let slot = self.slot(col, stage);
                // Row vector times F is F applied to the column (F = Fᵀ).
                self.time_to_spectrum(&mut adj);
                let drive = &self.after_drive[slot.clone()];
                for j in 0..m {
                    grad[base + m + j] -= 2.0 * (adj[j] * drive[j]).im;
                }
                for (a, d) in adj.iter_mut().zip(&self.phasors[base + m..base + 2 * m]) {
                    *a *= d;
                }
                self.spectrum_to_time(&mut adj);
                Self::mask(band, &mut adj);
                let shaped = &self.after_shaper[slot];
                for j in 0..m {
                    grad[base + j] -= 2.0 * (adj[j] * shaped[j]).im;
                }
                for (a, d) in adj.iter_mut().zip(&self.phasors[base..base + m]) {
                    *a *= d;
                }
            }
        }
    }
}
