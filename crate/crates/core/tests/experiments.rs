use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_gates::experiments::{
    band_range, bandwidth_sweep, centered_band, drive_spectrum, required_sampling_rate,
};
use spectral_gates::optimize::Evaluator;
use spectral_gates::{optimize, Band, GateSpec, GateTarget, OptimizeConfig, PhaseVector};

fn random_params(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0.0..TAU)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn full_band_is_unfiltered(seed in any::<u64>(), cz in any::<bool>()) {
        let spec = if cz {
            GateSpec::cz_default(16).unwrap()
        } else {
            GateSpec::single_qubit(16, GateTarget::Hadamard).unwrap()
        };
        let params = random_params(seed, 2 * 3 * 16);
        let mut eval = Evaluator::new(&spec, 3);
        let free = eval.metrics(&params, None).unwrap();
        let full = eval.metrics(&params, Some(Band::full(16))).unwrap();
        prop_assert!((free.fidelity - full.fidelity).abs() < 1e-12);
        prop_assert!((free.probability - full.probability).abs() < 1e-12);
    }

    #[test]
    fn filtered_single_photon_stays_normalized(seed in any::<u64>(), size in 2usize..16) {
        // Band projection is a contraction, so no column of W can grow
        // past unit norm.
        let spec = GateSpec::single_qubit(16, GateTarget::Hadamard).unwrap();
        let params = random_params(seed, 2 * 2 * 16);
        let mut eval = Evaluator::new(&spec, 2);
        let band = centered_band(&spec, size).unwrap();
        let cut = eval.metrics(&params, Some(band)).unwrap();
        prop_assert!(cut.probability <= 1.0 + 1e-9);
    }
}

fn hadamard_solution() -> spectral_gates::Solution {
    let spec = GateSpec::single_qubit(32, GateTarget::Hadamard).unwrap();
    let ocfg = OptimizeConfig {
        restarts: 16,
        ..OptimizeConfig::new(32, 2)
    };
    optimize(&spec, &ocfg).unwrap()
}

#[test]
fn hadamard_bandwidth_curve() {
    let sol = hadamard_solution();
    assert!(sol.feasible);
    let sizes = band_range(2, 32, 1).unwrap();
    let curve = bandwidth_sweep(&sol, &sizes).unwrap();
    let last = curve.band_sizes.len() - 1;
    assert!((curve.probabilities[last] - curve.unfiltered.probability).abs() < 1e-12);
    assert!((curve.fidelities[last] - curve.unfiltered.fidelity).abs() < 1e-12);
    for &p in &curve.probabilities {
        assert!(p <= curve.unfiltered.probability + 1e-9);
    }
    let n = curve
        .effective_modes
        .expect("90% of P is reached within the grid");
    assert!((6..=10).contains(&n), "effective modes {n}");
    let at6 = curve.band_sizes.iter().position(|&b| b == 6).unwrap();
    assert!(
        curve.fidelities[at6] >= 0.99,
        "F at 6 modes: {}",
        curve.fidelities[at6]
    );
}

#[test]
fn solution_drives_are_band_limited() {
    let sol = hadamard_solution();
    for eom in sol.network.eoms() {
        let s = drive_spectrum(eom).unwrap();
        assert!(s.bandwidth_10db <= 16);
    }
    let rate = required_sampling_rate(&sol, 25e9).unwrap();
    assert!(rate > 0.0 && rate <= 2.0 * 16.0 * 25e9);
}

#[test]
fn sweep_rejects_bad_sizes() {
    let sol = hadamard_solution();
    assert!(bandwidth_sweep(&sol, &[]).is_err());
    assert!(bandwidth_sweep(&sol, &[8, 6]).is_err());
    assert!(bandwidth_sweep(&sol, &[1]).is_err());
    assert!(bandwidth_sweep(&sol, &[64]).is_err());
}

#[test]
fn single_tone_spectrum() {
    let m = 64;
    for h in [1, 5, 31] {
        let drive = PhaseVector::temporal(
            (0..m)
                .map(|j| 0.8 * (TAU * (h * j) as f64 / m as f64).cos())
                .collect(),
        )
        .unwrap();
        let s = drive_spectrum(&drive).unwrap();
        assert_eq!(s.bandwidth_10db, h);
        assert_eq!(s.power_db[h - 1], 0.0);
        assert!(s
            .power_db
            .iter()
            .enumerate()
            .all(|(i, &db)| i == h - 1 || db < -200.0));
    }
}
