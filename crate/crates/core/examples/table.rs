//! Synthesizes the Hadamard and CZ cases and prints probability, effective
//! mode count and drive bandwidths for each.
//!
//! cargo run --release --example table -- [restarts]

use spectral_gates::experiments::{band_range, bandwidth_sweep, solution_spectra};
use spectral_gates::optimize::doubled_grid_metrics;
use spectral_gates::{optimize, GateSpec, GateTarget, OptimizeConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let restarts: usize = match std::env::args().nth(1) {
        Some(arg) => arg.parse()?,
        None => 32,
    };
    let cases = [("H", 32, 2), ("CZ", 64, 2), ("CZ", 64, 3), ("CZ", 64, 4)];
    println!("gate  R  F         P        eff. modes  10-dB bandwidths  F, P at 2M");
    for (gate, m, r) in cases {
        let spec = match gate {
            "H" => GateSpec::single_qubit(m, GateTarget::Hadamard)?,
            _ => GateSpec::cz_default(m)?,
        };
        let sol = optimize(
            &spec,
            &OptimizeConfig {
                restarts,
                ..OptimizeConfig::new(m, r)
            },
        )?;
        let first = if gate == "H" { 2 } else { 8 };
        let curve = bandwidth_sweep(&sol, &band_range(first, m, 2)?)?;
        let bw: Vec<usize> = solution_spectra(&sol)?
            .iter()
            .map(|s| s.bandwidth_10db)
            .collect();
        let wide = doubled_grid_metrics(&spec, r, &sol.network.to_params())?;
        println!(
            "{gate:<4}  {r}  {:.6}  {:.5}  {:<10}  {:<16}  {:.6}, {:.5}{}",
            sol.metrics.fidelity,
            sol.metrics.probability,
            curve.effective_modes.map_or("-".into(), |n| n.to_string()),
            format!("{bw:?}"),
            wide.fidelity,
            wide.probability,
            if sol.feasible { "" } else { "  (infeasible)" },
        );
    }
    Ok(())
}
