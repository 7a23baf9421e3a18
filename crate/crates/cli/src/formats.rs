//! Versioned TOML documents: run configs and solution files.
//!
//! Solution phases and metrics are stored twice: as C99 hex-float strings,
//! which are exact and authoritative, and as decimal mirrors for reading.
//! A file whose mirrors disagree with the hex values is rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spectral_gates::fock::QubitModes;
use spectral_gates::optimize::{GradientMode, InitStrategy, PenaltySchedule, Provenance};
use spectral_gates::{
    GateSpec, GateTarget, Metrics, NetworkConfig, OptimizeConfig, PhaseVector, Solution,
};

use crate::error::{CliError, Result};

pub const CONFIG_SCHEMA: &str = "spectral-gates.config";
pub const SOLUTION_SCHEMA: &str = "spectral-gates.solution";
pub const FORMAT_VERSION: u32 = 1;

pub const PRESETS: [&str; 4] = ["hadamard-2-2", "cz-2", "cz-3", "cz-4"];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub schema: String,
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default)]
    pub gate: GateSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSection {
    /// `hadamard`, `cz` or `phase(<radians>)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<usize>,
    /// `[zero, one]` mode pairs; the default layout is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ancillas: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<GradientMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_probability: Option<f64>,
    /// 0 turns the doubled-grid check off.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub init: Option<InitStrategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltySection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rounds: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

/// Gate, size and restart budget for each bundled preset.
pub fn preset(name: &str) -> Option<ConfigFile> {
    let (gate, modes, stages, restarts) = match name {
        "hadamard-2-2" => ("hadamard", 32, 2, 50),
        "cz-2" => ("cz", 64, 2, 200),
        "cz-3" => ("cz", 64, 3, 200),
        "cz-4" => ("cz", 64, 4, 200),
        _ => return None,
    };
    Some(ConfigFile {
        schema: CONFIG_SCHEMA.into(),
        version: FORMAT_VERSION,
        preset: Some(name.into()),
        gate: GateSection {
            name: Some(gate.into()),
            modes: Some(modes),
            stages: Some(stages),
            ..Default::default()
        },
        optimizer: OptimizerSection {
            restarts: Some(restarts),
            ..Default::default()
        },
    })
}

fn check_header(path: &Path, schema: &str, expected: &str, version: u32) -> Result<()> {
    if schema != expected {
        return Err(CliError::schema(
            path,
            format!("schema is `{schema}`, expected `{expected}`"),
        ));
    }
    if version != FORMAT_VERSION {
        return Err(CliError::schema(
            path,
            format!("unsupported version {version}, this build reads version {FORMAT_VERSION}"),
        ));
    }
    Ok(())
}

fn parse_toml<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    toml::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    toml::to_string(value).map_err(|e| CliError::Usage(format!("serializing TOML: {e}")))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Fully resolved synthesis inputs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub spec: GateSpec,
    pub optimizer: OptimizeConfig,
    /// The config with every field filled in, as recorded in manifests.
    pub resolved: ConfigFile,
}

impl ConfigFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let cfg: Self = parse_toml(text, path)?;
        check_header(path, &cfg.schema, CONFIG_SCHEMA, cfg.version)?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        to_toml(self)
    }

    /// Fields set here win over those of `base`.
    fn overlay(self, base: ConfigFile) -> ConfigFile {
        let g = self.gate;
        let bg = base.gate;
        let o = self.optimizer;
        let bo = base.optimizer;
        let penalty = match (o.penalty, bo.penalty) {
            (Some(p), Some(bp)) => Some(PenaltySection {
                initial_weight: p.initial_weight.or(bp.initial_weight),
                growth: p.growth.or(bp.growth),
                max_rounds: p.max_rounds.or(bp.max_rounds),
                margin: p.margin.or(bp.margin),
            }),
            (p, bp) => p.or(bp),
        };
        ConfigFile {
            schema: self.schema,
            version: self.version,
            preset: self.preset.or(base.preset),
            gate: GateSection {
                name: g.name.or(bg.name),
                modes: g.modes.or(bg.modes),
                stages: g.stages.or(bg.stages),
                qubits: g.qubits.or(bg.qubits),
                ancillas: g.ancillas.or(bg.ancillas),
            },
            optimizer: OptimizerSection {
                restarts: o.restarts.or(bo.restarts),
                seed: o.seed.or(bo.seed),
                fidelity_floor: o.fidelity_floor.or(bo.fidelity_floor),
                max_iters: o.max_iters.or(bo.max_iters),
                gradient: o.gradient.or(bo.gradient),
                fd_step: o.fd_step.or(bo.fd_step),
                target_probability: o.target_probability.or(bo.target_probability),
                truncation_tol: o.truncation_tol.or(bo.truncation_tol),
                init: o.init.or(bo.init),
                penalty,
            },
        }
    }

    /// Applies the named preset underneath, fills defaults, and builds the
    /// gate spec and optimizer settings.
    pub fn resolve(self, path: &Path) -> Result<RunConfig> {
        let cfg = match self.preset.clone() {
            Some(name) => {
                let base = preset(&name).ok_or_else(|| {
                    CliError::schema(
                        path,
                        format!("unknown preset `{name}` (known: {})", PRESETS.join(", ")),
                    )
                })?;
                self.overlay(base)
            }
            None => self,
        };
        let missing = |field: &str| CliError::schema(path, format!("missing field `gate.{field}`"));
        let g = &cfg.gate;
        let name = g.name.clone().ok_or_else(|| missing("name"))?;
        let modes = g.modes.ok_or_else(|| missing("modes"))?;
        let stages = g.stages.ok_or_else(|| missing("stages"))?;
        let target = GateTarget::parse(&name)?;
        let spec = match (&g.qubits, &g.ancillas) {
            (None, None) => match target {
                GateTarget::Cz => GateSpec::cz_default(modes)?,
                _ => GateSpec::single_qubit(modes, target)?,
            },
            (Some(q), a) => GateSpec::new(
                modes,
                q.iter().map(|&[z, o]| QubitModes::new(z, o)).collect(),
                a.clone().unwrap_or_default(),
                target,
            )?,
            (None, Some(_)) => {
                return Err(CliError::schema(
                    path,
                    "`gate.ancillas` given without `gate.qubits`",
                ))
            }
        };

        let mut ocfg = OptimizeConfig::new(modes, stages);
        let o = &cfg.optimizer;
        ocfg.restarts = o.restarts.unwrap_or(ocfg.restarts);
        ocfg.seed = o.seed.unwrap_or(ocfg.seed);
        ocfg.fidelity_floor = o.fidelity_floor.unwrap_or(ocfg.fidelity_floor);
        ocfg.max_iters = o.max_iters.unwrap_or(ocfg.max_iters);
        ocfg.gradient = o.gradient.unwrap_or(ocfg.gradient);
        ocfg.fd_step = o.fd_step.unwrap_or(ocfg.fd_step);
        ocfg.target_probability = o.target_probability;
        ocfg.truncation_tol = match o.truncation_tol {
            Some(0.0) => None,
            Some(t) => Some(t),
            None => ocfg.truncation_tol,
        };
        ocfg.init = o.init.unwrap_or(ocfg.init);
        if let Some(p) = &o.penalty {
            let d = ocfg.penalty;
            ocfg.penalty = PenaltySchedule {
                initial_weight: p.initial_weight.unwrap_or(d.initial_weight),
                growth: p.growth.unwrap_or(d.growth),
                max_rounds: p.max_rounds.unwrap_or(d.max_rounds),
                margin: p.margin.unwrap_or(d.margin),
            };
        }
        ocfg.validate()?;
        let resolved = ConfigFile {
            schema: CONFIG_SCHEMA.into(),
            version: FORMAT_VERSION,
            preset: cfg.preset.clone(),
            gate: GateSection {
                name: Some(name),
                modes: Some(modes),
                stages: Some(stages),
                qubits: Some(spec.qubits().iter().map(|q| [q.zero, q.one]).collect()),
                ancillas: Some(spec.ancillas().to_vec()),
            },
            optimizer: optimizer_section(&ocfg),
        };
        Ok(RunConfig {
            spec,
            optimizer: ocfg,
            resolved,
        })
    }
}

fn optimizer_section(o: &OptimizeConfig) -> OptimizerSection {
    let p = o.penalty;
    OptimizerSection {
        restarts: Some(o.restarts),
        seed: Some(o.seed),
        fidelity_floor: Some(o.fidelity_floor),
        max_iters: Some(o.max_iters),
        gradient: Some(o.gradient),
        fd_step: Some(o.fd_step),
        target_probability: o.target_probability,
        truncation_tol: Some(o.truncation_tol.unwrap_or(0.0)),
        init: Some(o.init),
        penalty: Some(PenaltySection {
            initial_weight: Some(p.initial_weight),
            growth: Some(p.growth),
            max_rounds: Some(p.max_rounds),
            margin: Some(p.margin),
        }),
    }
}

pub fn hex(value: f64) -> String {
    hexfloat2::format(value)
}

fn from_hex(text: &str, path: &Path, field: &str) -> Result<f64> {
    hexfloat2::parse::<f64>(text)
        .map_err(|_| CliError::schema(path, format!("{field}: `{text}` is not a hex float")))
}

/// Parses the hex values and checks every decimal mirror against them.
fn exact_values(hexes: &[String], mirror: &[f64], path: &Path, field: &str) -> Result<Vec<f64>> {
    if hexes.len() != mirror.len() {
        return Err(CliError::schema(
            path,
            format!(
                "{field}: {} hex values but {} decimal mirrors",
                hexes.len(),
                mirror.len()
            ),
        ));
    }
    hexes
        .iter()
        .zip(mirror)
        .enumerate()
        .map(|(i, (h, &d))| {
            let v = from_hex(h, path, field)?;
            if v.to_bits() != d.to_bits() {
                return Err(CliError::schema(
                    path,
                    format!("{field}[{i}]: decimal mirror {d} disagrees with hex value {h} ({v})"),
                ));
            }
            Ok(v)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub schema: String,
    pub version: u32,
    pub feasible: bool,
    pub gate: GateRecord,
    pub metrics: MetricsRecord,
    pub network: NetworkRecord,
    pub provenance: ProvenanceRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateRecord {
    pub target: String,
    pub modes: usize,
    pub qubits: Vec<[usize; 2]>,
    pub ancillas: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsRecord {
    pub fidelity: String,
    pub fidelity_decimal: f64,
    pub probability: String,
    pub probability_decimal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkRecord {
    pub modes: usize,
    pub stages: usize,
    /// Stage `k` applies its shaper, then its modulator.
    pub stage: Vec<StageRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageRecord {
    pub shaper: Vec<String>,
    pub shaper_decimal: Vec<f64>,
    pub drive: Vec<String>,
    pub drive_decimal: Vec<f64>,
}

/// Solution provenance minus wall time, which lives in the run manifest so
/// that reruns produce identical files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceRecord {
    pub seed: u64,
    pub restart: usize,
    pub iterations: usize,
    pub restarts_run: usize,
    pub feasible_restarts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_robust: Option<bool>,
    pub objective_trace: Vec<f64>,
    pub optimizer: OptimizeConfig,
}

impl SolutionFile {
    pub fn from_solution(sol: &Solution) -> Self {
        let net = &sol.network;
        let stage = net
            .shapers()
            .iter()
            .zip(net.eoms())
            .map(|(s, e)| StageRecord {
                shaper: s.values().iter().map(|&v| hex(v)).collect(),
                shaper_decimal: s.values().to_vec(),
                drive: e.values().iter().map(|&v| hex(v)).collect(),
                drive_decimal: e.values().to_vec(),
            })
            .collect();
        let p = &sol.provenance;
        Self {
            schema: SOLUTION_SCHEMA.into(),
            version: FORMAT_VERSION,
            feasible: sol.feasible,
            gate: GateRecord {
                target: sol.spec.target().label(),
                modes: sol.spec.modes(),
                qubits: sol.spec.qubits().iter().map(|q| [q.zero, q.one]).collect(),
                ancillas: sol.spec.ancillas().to_vec(),
            },
            metrics: MetricsRecord {
                fidelity: hex(sol.metrics.fidelity),
                fidelity_decimal: sol.metrics.fidelity,
                probability: hex(sol.metrics.probability),
                probability_decimal: sol.metrics.probability,
            },
            network: NetworkRecord {
                modes: net.modes(),
                stages: net.stages(),
                stage,
            },
            provenance: ProvenanceRecord {
                seed: p.seed,
                restart: p.restart,
                iterations: p.iterations,
                restarts_run: p.restarts_run,
                feasible_restarts: p.feasible_restarts,
                truncation_robust: p.truncation_robust,
                objective_trace: p.objective_trace.clone(),
                optimizer: p.optimizer.clone(),
            },
        }
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let file: Self = parse_toml(text, path)?;
        check_header(path, &file.schema, SOLUTION_SCHEMA, file.version)?;
        Ok(file)
    }

    pub fn to_toml(&self) -> Result<String> {
        to_toml(self)
    }

    /// Rebuilds the in-memory solution; `path` only labels errors.
    pub fn to_solution(&self, path: &Path) -> Result<Solution> {
        let g = &self.gate;
        let spec = GateSpec::new(
            g.modes,
            g.qubits
                .iter()
                .map(|&[z, o]| QubitModes::new(z, o))
                .collect(),
            g.ancillas.clone(),
            GateTarget::parse(&g.target)?,
        )?;
        let n = &self.network;
        if n.stage.len() != n.stages {
            return Err(CliError::schema(
                path,
                format!(
                    "network.stages = {} but {} stages listed",
                    n.stages,
                    n.stage.len()
                ),
            ));
        }
        let mut shapers = Vec::with_capacity(n.stages);
        let mut eoms = Vec::with_capacity(n.stages);
        for (k, st) in n.stage.iter().enumerate() {
            let label = |what: &str| format!("network.stage[{k}].{what}");
            shapers.push(PhaseVector::spectral(exact_values(
                &st.shaper,
                &st.shaper_decimal,
                path,
                &label("shaper"),
            )?)?);
            eoms.push(PhaseVector::temporal(exact_values(
                &st.drive,
                &st.drive_decimal,
                path,
                &label("drive"),
            )?)?);
        }
        let network = NetworkConfig::new(n.modes, shapers, eoms)?;
        let m = &self.metrics;
        let metrics = Metrics {
            fidelity: exact_values(
                std::slice::from_ref(&m.fidelity),
                &[m.fidelity_decimal],
                path,
                "metrics.fidelity",
            )?[0],
            probability: exact_values(
                std::slice::from_ref(&m.probability),
                &[m.probability_decimal],
                path,
                "metrics.probability",
            )?[0],
        };
        let p = &self.provenance;
        Ok(Solution {
            spec,
            network,
            metrics,
            feasible: self.feasible,
            provenance: Provenance {
                seed: p.seed,
                restart: p.restart,
                iterations: p.iterations,
                wall_time_s: 0.0,
                restarts_run: p.restarts_run,
                feasible_restarts: p.feasible_restarts,
                truncation_robust: p.truncation_robust,
                objective_trace: p.objective_trace.clone(),
                optimizer: p.optimizer.clone(),
            },
        })
    }
}

pub fn solution_to_string(sol: &Solution) -> Result<String> {
    SolutionFile::from_solution(sol).to_toml()
}

pub fn read_solution(path: &Path) -> Result<Solution> {
    let text = read_text(path)?;
    SolutionFile::parse(&text, path)?.to_solution(path)
}
