//! Multi-start search over the `2RM` phases of a shaper/EOM chain,
//! maximizing heralded success probability under a fidelity floor.
//!
//! Each restart runs L-BFGS on `-P + w·max(0, floor - F)²` and escalates the
//! penalty weight `w` until the fidelity floor holds. Restarts are seeded
//! independently from `(seed, restart index)`, so results do not depend on
//! scheduling or thread count.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::Propagator;
use crate::error::{Error, Result};
use crate::fock::{lift_matrix, GateSpec, GateTarget, LocalLift};
use crate::lbfgs::{self, LbfgsOptions};
use crate::metrics::{self, penalized, target, Metrics, DEFAULT_FIDELITY_FLOOR};
use crate::network::{compose_network, Band, CMatrix, ModeIndex, NetworkConfig};

/// Tolerance for recomputed metrics against stored ones.
pub const VERIFY_TOL: f64 = 1e-9;

/// Restarts are dispatched in fixed-size batches so early stopping sees the
/// same set of completed restarts regardless of thread count.
const BATCH: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    Analytic,
    FiniteDifference,
}

/// How random restarts pick their starting phases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum InitStrategy {
    /// Every phase i.i.d. uniform on `[0, 2π)`.
    Uniform,
    /// Shaper phases uniform; each drive a random sum of the first
    /// `harmonics` harmonics with peak amplitude up to `amplitude` radians.
    SmoothDrive { harmonics: usize, amplitude: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltySchedule {
    pub initial_weight: f64,
    pub growth: f64,
    pub max_rounds: usize,
    /// The penalty targets `floor + margin` so that the finite-weight
    /// optimum still clears the floor.
    pub margin: f64,
}

impl Default for PenaltySchedule {
    fn default() -> Self {
        Self {
            initial_weight: 1e2,
            growth: 10.0,
            max_rounds: 8,
            margin: 2e-5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeConfig {
    pub modes: usize,
    pub stages: usize,
    pub fidelity_floor: f64,
    pub restarts: usize,
    /// L-BFGS iterations per penalty round.
    pub max_iters: usize,
    pub penalty: PenaltySchedule,
    pub seed: u64,
    pub gradient: GradientMode,
    pub fd_step: f64,
    pub init: InitStrategy,
    /// Stop scheduling restarts once a feasible solution reaches this.
    pub target_probability: Option<f64>,
    /// Each restart is re-evaluated on a grid of `2M` modes; one whose `F`
    /// or `P` moves by more than this ranks below every restart that does
    /// not. `None` skips the check.
    pub truncation_tol: Option<f64>,
}

impl OptimizeConfig {
    pub fn new(modes: usize, stages: usize) -> Self {
        Self {
            modes,
            stages,
            fidelity_floor: DEFAULT_FIDELITY_FLOOR,
            restarts: 20,
            max_iters: 3000,
            penalty: PenaltySchedule::default(),
            seed: 0,
            gradient: GradientMode::Analytic,
            fd_step: 1e-6,
            init: InitStrategy::SmoothDrive {
                harmonics: 1,
                amplitude: 1.5,
            },
            target_probability: None,
            truncation_tol: Some(1e-3),
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidOptimizer(msg));
        if !(self.fidelity_floor > 0.0 && self.fidelity_floor <= 1.0) {
            return bad(format!(
                "fidelity floor {} outside (0, 1]",
                self.fidelity_floor
            ));
        }
        if self.restarts < 1 {
            return bad("need at least one restart".into());
        }
        if self.stages < 1 || self.modes < 2 {
            return bad(format!(
                "need R >= 1 and M >= 2, got R = {}, M = {}",
                self.stages, self.modes
            ));
        }
        if !(self.fd_step > 0.0) {
            return bad(format!("fd_step must be positive, got {}", self.fd_step));
        }
        if let Some(tol) = self.truncation_tol {
            if !(tol > 0.0) {
                return bad(format!("truncation tolerance must be positive, got {tol}"));
            }
        }
        let p = &self.penalty;
        if !(p.initial_weight >= 0.0 && p.growth >= 1.0 && p.max_rounds >= 1 && p.margin >= 0.0) {
            return bad(format!("bad penalty schedule {p:?}"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub restart: usize,
    pub iterations: usize,
    pub wall_time_s: f64,
    pub restarts_run: usize,
    pub feasible_restarts: usize,
    /// Whether the winner kept its metrics on a `2M` grid; `None` if not checked.
    pub truncation_robust: Option<bool>,
    /// Final penalized objective after each penalty round of the winner.
    pub objective_trace: Vec<f64>,
    pub optimizer: OptimizeConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub spec: GateSpec,
    pub network: NetworkConfig,
    pub metrics: Metrics,
    pub feasible: bool,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartSummary {
    pub index: usize,
    /// Final phases in the flat layout of [`NetworkConfig::to_params`].
    pub params: Vec<f64>,
    pub metrics: Metrics,
    pub feasible: bool,
    pub truncation_robust: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct OptimizeReport {
    pub solution: Solution,
    /// Every completed restart, in index order.
    pub restarts: Vec<RestartSummary>,
}

/// Fast evaluation of metrics and penalized objective for one gate spec.
pub struct Evaluator {
    spec: GateSpec,
    stages: usize,
    loaded: Vec<ModeIndex>,
    lift: LocalLift,
    target: CMatrix,
    propagator: Propagator,
}

impl Evaluator {
    pub fn new(spec: &GateSpec, stages: usize) -> Self {
        Self {
            spec: spec.clone(),
            stages,
            loaded: spec.loaded_modes(),
            lift: LocalLift::for_spec(spec),
            target: target(spec.target()).entries,
            propagator: Propagator::new(spec.modes(), stages),
        }
    }

    pub fn spec(&self) -> &GateSpec {
        &self.spec
    }

    pub fn param_count(&self) -> usize {
        2 * self.stages * self.spec.modes()
    }

    /// Heralded `W` of the (optionally band-filtered) chain.
    pub fn state_transform(&mut self, params: &[f64], band: Option<Band>) -> Result<CMatrix> {
        if let Some(b) = band {
            if let Some(&m) = self.loaded.iter().find(|&&m| !b.contains(m)) {
                return Err(Error::InvalidBand {
                    lo: b.lo(),
                    hi: b.hi(),
                    modes: self.spec.modes(),
                    reason: format!("loaded mode {m} lies outside the band"),
                });
            }
        }
        let s = self
            .propagator
            .forward(params, &self.loaded, &self.loaded, band)?;
        Ok(self.lift.apply(&s))
    }

    /// Metrics of the chain; an all-zero `W` reports `F = 0`.
    pub fn metrics(&mut self, params: &[f64], band: Option<Band>) -> Result<Metrics> {
        let w = self.state_transform(params, band)?;
        let probability = metrics::probability_matrix(&w, &self.target)?;
        let fidelity = match metrics::fidelity_matrix(&w, &self.target) {
            Ok(f) => f,
            Err(Error::UndefinedFidelity) => 0.0,
            Err(e) => return Err(e),
        };
        Ok(Metrics {
            fidelity,
            probability,
        })
    }

    pub fn objective(&mut self, params: &[f64], floor: f64, weight: f64) -> Result<f64> {
        let w = self.state_transform(params, None)?;
        Ok(penalized(&w, &self.target, floor, weight).value)
    }

    /// Objective, analytic gradient into `grad`, and the metrics at `params`.
    pub fn objective_with_gradient(
        &mut self,
        params: &[f64],
        floor: f64,
        weight: f64,
        grad: &mut [f64],
    ) -> Result<(f64, Metrics)> {
        let s = self
            .propagator
            .forward(params, &self.loaded, &self.loaded, None)?;
        let w = self.lift.apply(&s);
        let pv = penalized(&w, &self.target, floor, weight);
        let ds = self.lift.pullback(&s, &pv.grad_w);
        self.propagator.backward(&ds, &self.loaded, grad);
        Ok((
            pv.value,
            Metrics {
                fidelity: pv.fidelity,
                probability: pv.probability,
            },
        ))
    }

    /// Central-difference gradient of [`Self::objective`].
    pub fn objective_with_fd_gradient(
        &mut self,
        params: &[f64],
        floor: f64,
        weight: f64,
        step: f64,
        grad: &mut [f64],
    ) -> Result<f64> {
        let mut x = params.to_vec();
        for i in 0..x.len() {
            let orig = x[i];
            x[i] = orig + step;
            let plus = self.objective(&x, floor, weight)?;
            x[i] = orig - step;
            let minus = self.objective(&x, floor, weight)?;
            x[i] = orig;
            grad[i] = (plus - minus) / (2.0 * step);
        }
        self.objective(params, floor, weight)
    }
}

fn check_modes(cfg: &NetworkConfig, spec: &GateSpec) -> Result<()> {
    if cfg.modes() != spec.modes() {
        return Err(Error::ShapeMismatch(format!(
            "network has M = {} but the gate spec has M = {}",
            cfg.modes(),
            spec.modes()
        )));
    }
    Ok(())
}

/// Composes `V` densely, lifts it, and scores it against the spec's target.
pub fn evaluate(cfg: &NetworkConfig, spec: &GateSpec) -> Result<Metrics> {
    check_modes(cfg, spec)?;
    let v = compose_network(cfg)?;
    let w = lift_matrix(v.matrix(), spec)?;
    metrics::metrics(&w, &target(spec.target()))
}

/// `-P + weight·max(0, floor - F)²`.
pub fn objective(cfg: &NetworkConfig, spec: &GateSpec, floor: f64, weight: f64) -> Result<f64> {
    check_modes(cfg, spec)?;
    if weight < 0.0 {
        return Err(Error::InvalidOptimizer(format!(
            "negative penalty weight {weight}"
        )));
    }
    Evaluator::new(spec, cfg.stages()).objective(&cfg.to_params(), floor, weight)
}

/// Objective and its gradient in the flat layout of
/// [`NetworkConfig::to_params`].
pub fn objective_gradient(
    cfg: &NetworkConfig,
    spec: &GateSpec,
    floor: f64,
    weight: f64,
    mode: GradientMode,
    fd_step: f64,
) -> Result<(f64, Vec<f64>)> {
    check_modes(cfg, spec)?;
    let mut eval = Evaluator::new(spec, cfg.stages());
    let params = cfg.to_params();
    let mut grad = vec![0.0; params.len()];
    let value = match mode {
        GradientMode::Analytic => {
            eval.objective_with_gradient(&params, floor, weight, &mut grad)?
                .0
        }
        GradientMode::FiniteDifference => {
            eval.objective_with_fd_gradient(&params, floor, weight, fd_step, &mut grad)?
        }
    };
    Ok((value, grad))
}

/// Recomputes metrics from scratch and checks them against the stored ones.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn verify_solution(sol: &Solution) -> Result<Metrics> {
    let fresh = evaluate(&sol.network, &sol.spec)?;
    for (field, stored, recomputed) in [
        ("fidelity", sol.metrics.fidelity, fresh.fidelity),
        ("probability", sol.metrics.probability, fresh.probability),
    ] {
        if !((stored - recomputed).abs() <= VERIFY_TOL) {
            return Err(Error::CorruptedSolution {
                field,
                stored,
                recomputed,
            });
        }
    }
    if sol.feasible && fresh.fidelity < sol.provenance.optimizer.fidelity_floor {
        return Err(Error::CorruptedSolution {
            field: "feasible",
            stored: sol.provenance.optimizer.fidelity_floor,
            recomputed: fresh.fidelity,
        });
    }
    Ok(fresh)
}

#[derive(Clone, Debug)]
struct RestartOutcome {
    index: usize,
    params: Vec<f64>,
    metrics: Metrics,
    feasible: bool,
    robust: Option<bool>,
    penalty: f64,
    iterations: usize,
    trace: Vec<f64>,
}

impl RestartOutcome {
    /// Feasible beats infeasible and, among feasible ones, truncation-robust
    /// beats not; then higher P (feasible) or higher F (infeasible);
    /// near-ties go to lower penalty, then lower index.
    fn beats(&self, other: &Self) -> bool {
        if self.feasible != other.feasible {
            return self.feasible;
        }
        let robust = |o: &Self| o.robust == Some(true);
        if self.feasible && robust(self) != robust(other) {
            return robust(self);
        }
        let (a, b) = if self.feasible {
            (self.metrics.probability, other.metrics.probability)
        } else {
            (self.metrics.fidelity, other.metrics.fidelity)
        };
        if (a - b).abs() > 1e-9 {
            return a > b;
        }
        if self.penalty != other.penalty {
            return self.penalty < other.penalty;
        }
        self.index < other.index
    }
}

fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn initial_params(spec: &GateSpec, ocfg: &OptimizeConfig, index: usize) -> Vec<f64> {
    let (m, r) = (ocfg.modes, ocfg.stages);
    let mut x = vec![0.0; 2 * r * m];
    if index == 0 {
        return x;
    }
    let mut rng = restart_rng(ocfg.seed, index);
    let coarse_sinusoid = index == 1 && spec.target() == GateTarget::Hadamard;
    for stage in 0..r {
        let base = 2 * stage * m;
        for v in &mut x[base..base + m] {
            *v = rng.gen_range(0.0..TAU);
        }
        let drive = &mut x[base + m..base + 2 * m];
        let strategy = if coarse_sinusoid {
            InitStrategy::SmoothDrive {
                harmonics: 1,
                amplitude: 1.5,
            }
        } else {
            ocfg.init
        };
        match strategy {
            InitStrategy::Uniform => {
                for v in drive.iter_mut() {
                    *v = rng.gen_range(0.0..TAU);
                }
            }
            InitStrategy::SmoothDrive {
                harmonics,
                amplitude,
            } => {
                let terms: Vec<(f64, f64)> = (0..harmonics)
                    .map(|_| (rng.gen_range(0.0..amplitude), rng.gen_range(0.0..TAU)))
                    .collect();
                for (j, v) in drive.iter_mut().enumerate() {
                    let t = TAU * j as f64 / m as f64;
                    *v = terms
                        .iter()
                        .enumerate()
                        .map(|(h, (a, p))| a * ((h + 1) as f64 * t + p).sin())
                        .sum();
                }
            }
        }
    }
    x
}

fn run_restart(spec: &GateSpec, ocfg: &OptimizeConfig, index: usize) -> Result<RestartOutcome> {
    let mut eval = Evaluator::new(spec, ocfg.stages);
    let floor = ocfg.fidelity_floor;
    let internal_floor = (floor + ocfg.penalty.margin).min(1.0);
    let opts = LbfgsOptions {
        max_iters: ocfg.max_iters,
        ..LbfgsOptions::default()
    };
    let mut x = initial_params(spec, ocfg, index);
    let mut weight = ocfg.penalty.initial_weight;
    let mut iterations = 0;
    let mut trace = Vec::new();
    let mut failure: Option<Error> = None;

    for _ in 0..ocfg.penalty.max_rounds {
        let out = {
            let eval = &mut eval;
            let failure = &mut failure;
            let f = |p: &[f64], g: &mut [f64]| -> f64 {
                let res = match ocfg.gradient {
                    GradientMode::Analytic => eval
                        .objective_with_gradient(p, internal_floor, weight, g)
                        .map(|(v, _)| v),
                    GradientMode::FiniteDifference => {
                        eval.objective_with_fd_gradient(p, internal_floor, weight, ocfg.fd_step, g)
                    }
                };
                res.unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    f64::NAN
                })
            };
            lbfgs::minimize(f, x, &opts)
        };
        if let Some(e) = failure {
            return Err(e);
        }
        x = out.x;
        iterations += out.iterations;
        trace.push(out.value);
        if eval.metrics(&x, None)?.fidelity >= floor {
            break;
        }
        weight *= ocfg.penalty.growth;
    }

    let metrics = eval.metrics(&x, None)?;
    let deficit = (internal_floor - metrics.fidelity).max(0.0);
    let feasible = metrics.fidelity >= floor;
    let robust = match ocfg.truncation_tol {
        Some(tol) if feasible => {
            let wide = doubled_grid_metrics(spec, ocfg.stages, &x)?;
            Some(
                (wide.fidelity - metrics.fidelity).abs() <= tol
                    && (wide.probability - metrics.probability).abs() <= tol,
            )
        }
        _ => None,
    };
    Ok(RestartOutcome {
        index,
        params: x,
        metrics,
        feasible,
        robust,
        penalty: weight * deficit * deficit,
        iterations,
        trace,
    })
}

/// Metrics of the chain embedded in the middle of a grid twice as large.
pub fn doubled_grid_metrics(spec: &GateSpec, stages: usize, params: &[f64]) -> Result<Metrics> {
    let m = spec.modes();
    let wide = NetworkConfig::from_params(m, stages, params)?.embed(2 * m, m / 2)?;
    let wide_spec = spec.shifted(2 * m, m / 2)?;
    Evaluator::new(&wide_spec, stages).metrics(&wide.to_params(), None)
}

#[cfg(feature = "parallel")]
fn run_batch(
    spec: &GateSpec,
    ocfg: &OptimizeConfig,
    range: std::ops::Range<usize>,
) -> Vec<Result<RestartOutcome>> {
    use rayon::prelude::*;
    range
        .into_par_iter()
        .map(|i| run_restart(spec, ocfg, i))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_batch(
    spec: &GateSpec,
    ocfg: &OptimizeConfig,
    range: std::ops::Range<usize>,
) -> Vec<Result<RestartOutcome>> {
    range.map(|i| run_restart(spec, ocfg, i)).collect()
}

#[cfg(not(target_arch = "wasm32"))]
fn clock() -> impl FnOnce() -> f64 {
    let start = std::time::Instant::now();
    move || start.elapsed().as_secs_f64()
}

#[cfg(target_arch = "wasm32")]
fn clock() -> impl FnOnce() -> f64 {
    || 0.0
}

/// Best solution over all restarts, with per-restart summaries.
pub fn optimize_with_report(spec: &GateSpec, ocfg: &OptimizeConfig) -> Result<OptimizeReport> {
    ocfg.validate()?;
    if spec.modes() != ocfg.modes {
        return Err(Error::ShapeMismatch(format!(
            "optimizer has M = {} but the gate spec has M = {}",
            ocfg.modes,
            spec.modes()
        )));
    }
    let elapsed = clock();
    let mut best: Option<RestartOutcome> = None;
    let mut summaries = Vec::with_capacity(ocfg.restarts);
    let mut start = 0;
    while start < ocfg.restarts {
        let end = (start + BATCH).min(ocfg.restarts);
        for outcome in run_batch(spec, ocfg, start..end) {
            let outcome = outcome?;
            summaries.push(RestartSummary {
                index: outcome.index,
                params: outcome.params.clone(),
                metrics: outcome.metrics,
                feasible: outcome.feasible,
                truncation_robust: outcome.robust,
            });
            if best.as_ref().is_none_or(|b| outcome.beats(b)) {
                best = Some(outcome);
            }
        }
        start = end;
        if let (Some(goal), Some(b)) = (ocfg.target_probability, &best) {
            if b.feasible && b.metrics.probability >= goal {
                break;
            }
        }
    }
    let best = best.expect("at least one restart");
    let network = NetworkConfig::from_params(ocfg.modes, ocfg.stages, &best.params)?;
    let solution = Solution {
        spec: spec.clone(),
        metrics: evaluate(&network, spec)?,
        network,
        feasible: best.feasible,
        provenance: Provenance {
            seed: ocfg.seed,
            restart: best.index,
            iterations: best.iterations,
            wall_time_s: elapsed(),
            restarts_run: summaries.len(),
            feasible_restarts: summaries.iter().filter(|s| s.feasible).count(),
            truncation_robust: best.robust,
            objective_trace: best.trace,
            optimizer: ocfg.clone(),
        },
    };
    Ok(OptimizeReport {
        solution,
        restarts: summaries,
    })
}

/// Best solution over all restarts; infeasible results are flagged, not errors.
pub fn optimize(spec: &GateSpec, ocfg: &OptimizeConfig) -> Result<Solution> {
    optimize_with_report(spec, ocfg).map(|r| r.solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard(m: usize) -> GateSpec {
        GateSpec::single_qubit(m, GateTarget::Hadamard).unwrap()
    }

    #[test]
    fn zero_network_metrics() {
        let cfg = NetworkConfig::zeros(8, 2).unwrap();
        // W = I against H: Tr(H) = 0, so F = 0 while P = 1.
        let m = evaluate(&cfg, &hadamard(8)).unwrap();
        assert!(m.fidelity.abs() < 1e-15);
        assert!((m.probability - 1.0).abs() < 1e-15);

        let phase0 = GateSpec::single_qubit(8, GateTarget::Phase { angle: 0.0 }).unwrap();
        let m = evaluate(&cfg, &phase0).unwrap();
        assert!((m.fidelity - 1.0).abs() < 1e-15);
        assert!((m.probability - 1.0).abs() < 1e-15);

        let mut eval = Evaluator::new(&hadamard(8), 2);
        let fast = eval.metrics(&cfg.to_params(), None).unwrap();
        assert!(fast.fidelity.abs() < 1e-15);
    }

    #[test]
    fn objective_arithmetic() {
        let cfg = NetworkConfig::zeros(8, 1).unwrap();
        let phase0 = GateSpec::single_qubit(8, GateTarget::Phase { angle: 0.0 }).unwrap();
        assert!((objective(&cfg, &phase0, 0.9999, 1e6).unwrap() + 1.0).abs() < 1e-12);

        // F = 1/2 against diag(1, i); floor 0.51 leaves a deficit of 0.01.
        let s = GateSpec::single_qubit(
            8,
            GateTarget::Phase {
                angle: std::f64::consts::FRAC_PI_2,
            },
        )
        .unwrap();
        let v = objective(&cfg, &s, 0.51, 1e4).unwrap();
        assert!((v - 0.0).abs() < 1e-9);
        assert!(objective(&cfg, &hadamard(8), 0.5, -1.0).is_err());
    }

    #[test]
    fn mismatched_modes_rejected() {
        let cfg = NetworkConfig::zeros(8, 1).unwrap();
        assert!(evaluate(&cfg, &hadamard(10)).is_err());
        let ocfg = OptimizeConfig::new(10, 1);
        assert!(optimize(&hadamard(8), &ocfg).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = OptimizeConfig::new(8, 1);
        assert!(c.validate().is_ok());
        c.fidelity_floor = 0.0;
        assert!(c.validate().is_err());
        c.fidelity_floor = 0.9;
        c.restarts = 0;
        assert!(c.validate().is_err());
        c.restarts = 1;
        c.fd_step = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn restart_seeds_are_independent_of_order() {
        let spec = hadamard(8);
        let ocfg = OptimizeConfig::new(8, 2);
        assert_eq!(
            initial_params(&spec, &ocfg, 5),
            initial_params(&spec, &ocfg, 5)
        );
        assert_ne!(
            initial_params(&spec, &ocfg, 5),
            initial_params(&spec, &ocfg, 6)
        );
        assert!(initial_params(&spec, &ocfg, 0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tie_breaking() {
        let base = RestartOutcome {
            index: 3,
            params: vec![],
            metrics: Metrics {
                fidelity: 0.99995,
                probability: 0.5,
            },
            feasible: true,
            robust: Some(true),
            penalty: 0.0,
            iterations: 0,
            trace: vec![],
        };
        let mut other = base.clone();
        other.index = 1;
        assert!(other.beats(&base));
        other.metrics.probability = 0.5 - 1e-6;
        assert!(base.beats(&other));
        other.robust = Some(false);
        other.metrics.probability = 0.9;
        assert!(base.beats(&other));
        other.feasible = false;
        other.robust = None;
        assert!(base.beats(&other));

        // Without the check every feasible restart competes on P alone.
        let mut unchecked = base.clone();
        unchecked.robust = None;
        let mut wide = unchecked.clone();
        wide.metrics.probability = 0.6;
        assert!(wide.beats(&unchecked));
    }
}
