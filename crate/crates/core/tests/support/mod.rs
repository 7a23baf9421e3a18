//! Independent reference computations shared by the integration tests and
//! the acceptance harness. Nothing here calls into the library.

#![allow(dead_code)]

use std::collections::HashMap;
use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type Mat = DMatrix<Complex64>;

/// Power series for the Bessel function of the first kind.
pub fn bessel_series(k: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(k as i32) / (1..=k).map(f64::from).product::<f64>();
    let mut sum = term;
    for m in 1..60 {
        term *= -half * half / (m as f64 * (m + k) as f64);
        sum += term;
        if term.abs() < 1e-30 {
            break;
        }
    }
    sum
}

/// `J_k(x) = (1/2π) ∫_0^{2π} cos(kτ - x sin τ) dτ` by the trapezoid rule,
/// which is spectrally accurate for this periodic integrand.
pub fn bessel_quadrature(k: i64, x: f64) -> f64 {
    let n = 400;
    let h = TAU / n as f64;
    (0..n)
        .map(|j| {
            let t = j as f64 * h;
            (k as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        * h
        / TAU
}

/// `J_k(x)` for any integer order.
pub fn bessel(k: i64, x: f64) -> f64 {
    let j = bessel_series(k.unsigned_abs() as u32, x);
    if k < 0 && k % 2 != 0 {
        -j
    } else {
        j
    }
}

/// `F_{nk} = M^{-1/2} e^{2πink/M}` entry by entry.
pub fn naive_dft(m: usize) -> Mat {
    let s = 1.0 / (m as f64).sqrt();
    Mat::from_fn(m, m, |n, k| {
        Complex64::from_polar(s, TAU * ((n * k) % m) as f64 / m as f64)
    })
}

pub fn diag(phases: &[f64]) -> Mat {
    Mat::from_diagonal(&DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&p| Complex64::cis(p)),
    ))
}

/// `(E_R D_R) ··· (E_1 D_1)` with `E = F D̃ F†`, all dense.
pub fn naive_network(m: usize, params: &[f64]) -> Mat {
    let f = naive_dft(m);
    let mut v = Mat::identity(m, m);
    for chunk in params.chunks(2 * m) {
        let eom = &f * diag(&chunk[m..]) * f.adjoint();
        v = eom * diag(&chunk[..m]) * v;
    }
    v
}

pub fn unitarity_defect(u: &Mat) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - Mat::identity(n, n)).norm()
}

/// Permanent by expansion over all permutations (Heap's algorithm).
pub fn permanent(a: &Mat) -> Complex64 {
    let n = a.nrows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    let term = |p: &[usize]| -> Complex64 { (0..n).map(|i| a[(i, p[i])]).product() };
    let mut sum = term(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sum += term(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    sum
}

/// `⟨out|Û|in⟩ = Perm(V[out, in]) / sqrt(Π n_j! Π m_k!)` for photon tuples.
pub fn tuple_amplitude(v: &Mat, out: &[usize], inp: &[usize]) -> Complex64 {
    let sub = Mat::from_fn(out.len(), inp.len(), |i, j| v[(out[i], inp[j])]);
    let norm = |t: &[usize]| -> f64 {
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &m in t {
            *counts.entry(m).or_default() += 1;
        }
        counts
            .values()
            .map(|&n| (1..=n).product::<u32>() as f64)
            .product()
    };
    permanent(&sub) / (norm(out) * norm(inp)).sqrt()
}

pub fn max_dev(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// `|Tr(T†W)|² / (Tr(W†W) Tr(T†T))`.
pub fn hs_fidelity(w: &Mat, t: &Mat) -> f64 {
    let overlap: Complex64 = t.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
    overlap.norm_sqr() / (w.norm_squared() * t.norm_squared())
}
