//! Network-level identities checked against independent constructions.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_gates::network::{
    compose_network, coupling_coefficients, dft_matrix, eom_unitary, shaper_unitary,
    unitarity_error,
};
use spectral_gates::{NetworkConfig, PhaseVector};

mod support;
use support::{bessel, bessel_quadrature, diag, naive_dft, naive_network};

fn random_phases(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(0.0..TAU)).collect()
}

#[test]
fn bessel_oracles_agree() {
    for k in -6..=6 {
        for x in [0.3, 1.0, 2.4, 5.0] {
            assert!(
                (bessel(k, x) - bessel_quadrature(k, x)).abs() < 1e-13,
                "k={k} x={x}"
            );
        }
    }
    // J_0 has its first zero near 2.404826.
    assert!(bessel(0, 2.404_825_557_695_773).abs() < 1e-14);
}

#[test]
fn sinusoidal_drive_gives_bessel_couplings() {
    let m = 64;
    for mu in [1.0, 0.4, 2.5] {
        let drive = PhaseVector::temporal(
            (0..m)
                .map(|j| mu * (TAU * j as f64 / m as f64).sin())
                .collect(),
        )
        .unwrap();
        let c = coupling_coefficients(&drive).unwrap();
        for (k, ck) in c.centered() {
            let expect = bessel(-k, mu);
            assert!(
                (ck - Complex64::new(expect, 0.0)).norm() < 1e-8,
                "mu={mu} k={k}: {ck} vs {expect}"
            );
        }
    }
}

#[test]
fn coupling_unitarity_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in [8, 31, 64] {
        let drive = PhaseVector::temporal(random_phases(&mut rng, m)).unwrap();
        let c = coupling_coefficients(&drive).unwrap();
        for n in 0..m as i64 {
            let s: Complex64 = (0..m as i64).map(|k| c.get(k) * c.get(k + n).conj()).sum();
            let expect = if n == 0 { 1.0 } else { 0.0 };
            assert!((s - expect).norm() < 1e-10, "m={m} n={n}: {s}");
        }
    }
}

#[test]
fn network_matches_naive_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (m, r) in [(6, 1), (16, 2), (33, 3)] {
        assert!((dft_matrix(m).unwrap().matrix() - naive_dft(m)).norm() < 1e-12);
        let params = random_phases(&mut rng, 2 * r * m);
        let cfg = NetworkConfig::from_params(m, r, &params).unwrap();
        let got = compose_network(&cfg).unwrap();
        assert!(
            (got.matrix() - naive_network(m, &params)).norm() < 1e-11,
            "M={m} R={r}"
        );
        let e = eom_unitary(&cfg.eoms()[0]).unwrap();
        let f = naive_dft(m);
        let expect = &f * diag(&params[m..2 * m]) * f.adjoint();
        assert!((e.matrix() - expect).norm() < 1e-12);
    }
}

#[test]
fn unitarity_up_to_128_modes() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for m in [1, 2, 7, 64, 128] {
        assert!(dft_matrix(m).unwrap().unitarity_error() < 1e-12);
        let p = random_phases(&mut rng, m);
        assert!(
            shaper_unitary(&PhaseVector::spectral(p.clone()).unwrap())
                .unwrap()
                .unitarity_error()
                < 1e-12
        );
        assert!(
            eom_unitary(&PhaseVector::temporal(p).unwrap())
                .unwrap()
                .unitarity_error()
                < 1e-12
        );
    }
    let m = 128;
    let params: Vec<f64> = (0..2 * 4 * m).map(|_| rng.gen_range(-PI..PI)).collect();
    let cfg = NetworkConfig::from_params(m, 4, &params).unwrap();
    let v = compose_network(&cfg).unwrap();
    assert!(unitarity_error(v.matrix()) < 1e-10);
}

#[test]
fn eom_shifts_spectrum_under_linear_drive() {
    // A drive advancing by 2π·s over the period is a pure frequency shift.
    let m = 16;
    let s = 3;
    let drive =
        PhaseVector::temporal((0..m).map(|j| TAU * (s * j) as f64 / m as f64).collect()).unwrap();
    let e = eom_unitary(&drive).unwrap();
    for n in 0..m {
        assert!((e.get((n + m - s) % m, n) - 1.0).norm() < 1e-12);
    }
}
