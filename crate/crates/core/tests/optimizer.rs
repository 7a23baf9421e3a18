use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_gates::optimize::{
    doubled_grid_metrics, objective, objective_gradient, optimize_with_report, GradientMode,
    RestartSummary,
};
use spectral_gates::{
    evaluate, optimize, verify_solution, Error, GateSpec, GateTarget, NetworkConfig,
    OptimizeConfig, Solution,
};

fn hadamard(m: usize) -> GateSpec {
    GateSpec::single_qubit(m, GateTarget::Hadamard).unwrap()
}

fn quick(m: usize, stages: usize, restarts: usize, seed: u64) -> OptimizeConfig {
    OptimizeConfig {
        restarts,
        seed,
        ..OptimizeConfig::new(m, stages)
    }
}

/// Central differences of the public objective, independent of the
/// optimizer's own finite-difference path.
fn central_difference(cfg: &NetworkConfig, spec: &GateSpec, floor: f64, weight: f64) -> Vec<f64> {
    let h = 1e-5;
    let params = cfg.to_params();
    (0..params.len())
        .map(|i| {
            let mut x = params.clone();
            x[i] += h;
            let plus = objective(
                &NetworkConfig::from_params(cfg.modes(), cfg.stages(), &x).unwrap(),
                spec,
                floor,
                weight,
            )
            .unwrap();
            x[i] -= 2.0 * h;
            let minus = objective(
                &NetworkConfig::from_params(cfg.modes(), cfg.stages(), &x).unwrap(),
                spec,
                floor,
                weight,
            )
            .unwrap();
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

#[test]
fn analytic_gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let specs = [
        hadamard(16),
        GateSpec::cz_default(16).unwrap(),
        GateSpec::single_qubit(16, GateTarget::Phase { angle: 1.1 }).unwrap(),
    ];
    for point in 0..10 {
        let spec = &specs[point % specs.len()];
        let params: Vec<f64> = (0..2 * 2 * 16).map(|_| rng.gen_range(0.0..6.3)).collect();
        let cfg = NetworkConfig::from_params(16, 2, &params).unwrap();
        // Floor 1 keeps the penalty active at every random point.
        let (floor, weight) = (1.0, 3.0);
        let (value, analytic) =
            objective_gradient(&cfg, spec, floor, weight, GradientMode::Analytic, 0.0).unwrap();
        assert!((value - objective(&cfg, spec, floor, weight).unwrap()).abs() < 1e-14);
        let fd = central_difference(&cfg, spec, floor, weight);
        let diff: f64 = analytic
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = fd.iter().map(|b| b * b).sum::<f64>().sqrt();
        assert!(
            diff <= 1e-5 * norm,
            "point {point}: |Δ| = {diff:e}, |g| = {norm:e}"
        );
    }
}

fn without_wall_time(mut sol: Solution) -> Solution {
    sol.provenance.wall_time_s = 0.0;
    sol
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let spec = hadamard(16);
    let ocfg = quick(16, 2, 12, 5);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| optimize(&spec, &ocfg).unwrap())
    };
    let one = without_wall_time(run(1));
    let two = without_wall_time(run(3));
    assert_eq!(one, two);
    assert_eq!(one.network.to_params(), two.network.to_params());
}

#[test]
fn same_seed_same_solution() {
    let spec = hadamard(16);
    let a = without_wall_time(optimize(&spec, &quick(16, 2, 4, 9)).unwrap());
    let b = without_wall_time(optimize(&spec, &quick(16, 2, 4, 9)).unwrap());
    assert_eq!(a, b);
}

#[test]
fn verify_detects_tampering() {
    let spec = hadamard(16);
    let sol = optimize(&spec, &quick(16, 2, 2, 1)).unwrap();
    verify_solution(&sol).unwrap();

    for field in 0..2 {
        let mut bad = sol.clone();
        if field == 0 {
            bad.metrics.fidelity -= 1e-3;
        } else {
            bad.metrics.probability += 1e-3;
        }
        assert!(matches!(
            verify_solution(&bad),
            Err(Error::CorruptedSolution { .. })
        ));
    }

    let mut bad = sol.clone();
    let mut params = bad.network.to_params();
    let m = bad.network.modes();
    // Shaper phase on the qubit's `1` mode: a relative phase between the
    // two rails that moves the fidelity at first order.
    params[m / 2] += 1e-3;
    bad.network = NetworkConfig::from_params(m, bad.network.stages(), &params).unwrap();
    let fresh = evaluate(&bad.network, &bad.spec).unwrap();
    assert!((fresh.fidelity - sol.metrics.fidelity).abs() > 1e-9);
    assert!(verify_solution(&bad).is_err());
}

#[test]
fn hadamard_solution_survives_a_doubled_grid() {
    let spec = hadamard(64);
    let sol = optimize(&spec, &quick(64, 2, 8, 0)).unwrap();
    assert!(sol.feasible);
    assert_eq!(sol.provenance.truncation_robust, Some(true));
    let wide = doubled_grid_metrics(&spec, 2, &sol.network.to_params()).unwrap();
    assert!((wide.fidelity - sol.metrics.fidelity).abs() < 1e-3);
    assert!((wide.probability - sol.metrics.probability).abs() < 1e-3);
}

#[test]
fn more_restarts_never_lower_the_best() {
    let spec = hadamard(16);
    let mut prev: Option<(Vec<RestartSummary>, bool, f64)> = None;
    for restarts in [2, 8, 16] {
        let ocfg = OptimizeConfig {
            truncation_tol: None,
            ..quick(16, 2, restarts, 21)
        };
        let report = optimize_with_report(&spec, &ocfg).unwrap();
        let feasible = report.solution.feasible;
        let best = report.solution.metrics.probability;
        if let Some((summaries, prev_feasible, prev_best)) = &prev {
            // Restart streams are independent, so earlier restarts reproduce.
            assert_eq!(&report.restarts[..summaries.len()], &summaries[..]);
            assert!(feasible || !prev_feasible);
            if *prev_feasible {
                assert!(best >= *prev_best);
            }
        }
        prev = Some((report.restarts, feasible, best));
    }
}

#[test]
fn single_stage_cz_is_infeasible() {
    let spec = GateSpec::cz_default(16).unwrap();
    let sol = optimize(&spec, &quick(16, 1, 4, 0)).unwrap();
    assert!(!sol.feasible);
    assert!(sol.metrics.fidelity < 0.9999);
}
