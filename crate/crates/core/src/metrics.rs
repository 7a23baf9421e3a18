//! Target transformations and the Hilbert-Schmidt fidelity / success
//! probability pair used to score a heralded transformation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{GateTarget, StateTransform};
use crate::network::CMatrix;

/// Fidelity floor a synthesized gate must meet.
pub const DEFAULT_FIDELITY_FLOOR: f64 = 0.9999;

#[derive(Clone, Debug, PartialEq)]
pub struct TargetTransform {
    pub name: String,
    pub entries: CMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub fidelity: f64,
    pub probability: f64,
}

/// Target matrix in the lifted basis. CZ is embedded as 10×4 with the six
/// double-occupancy rows left at zero.
pub fn target(gate: GateTarget) -> TargetTransform {
    let c = |re: f64| Complex64::new(re, 0.0);
    let entries = match gate {
        GateTarget::Phase { angle } => {
            CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), Complex64::cis(angle)])
        }
        GateTarget::Hadamard => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            CMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)])
        }
        GateTarget::Cz => {
            let mut t = CMatrix::zeros(10, 4);
            for i in 0..4 {
                t[(i, i)] = c(if i == 3 { -1.0 } else { 1.0 });
            }
            t
        }
    };
    TargetTransform {
        name: gate.label(),
        entries,
    }
}

/// `Tr(A†B)`.
pub(crate) fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn check_shapes(w: &CMatrix, t: &CMatrix) -> Result<()> {
    if w.shape() != t.shape() {
        return Err(Error::ShapeMismatch(format!(
            "W is {:?} but T is {:?}",
            w.shape(),
            t.shape()
        )));
    }
    Ok(())
}

pub fn fidelity_matrix(w: &CMatrix, t: &CMatrix) -> Result<f64> {
    check_shapes(w, t)?;
    let ww = w.norm_squared();
    if ww == 0.0 {
        return Err(Error::UndefinedFidelity);
    }
    let overlap = hs_inner(w, t).norm_sqr();
    Ok(overlap / (ww * t.norm_squared()))
}

pub fn probability_matrix(w: &CMatrix, t: &CMatrix) -> Result<f64> {
    check_shapes(w, t)?;
    Ok(w.norm_squared() / t.norm_squared())
}

/// `F = Tr(W†T)·Tr(T†W) / (Tr(W†W)·Tr(T†T))`.
pub fn fidelity(w: &StateTransform, t: &TargetTransform) -> Result<f64> {
    fidelity_matrix(&w.entries, &t.entries)
}

/// `P = Tr(W†W) / Tr(T†T)`.
pub fn success_probability(w: &StateTransform, t: &TargetTransform) -> Result<f64> {
    probability_matrix(&w.entries, &t.entries)
}

pub fn metrics(w: &StateTransform, t: &TargetTransform) -> Result<Metrics> {
    Ok(Metrics {
        fidelity: fidelity(w, t)?,
        probability: success_probability(w, t)?,
    })
}

/// Penalized objective and its Wirtinger derivative `∂J/∂W`.
pub(crate) struct PenalizedValue {
    pub value: f64,
    pub fidelity: f64,
    pub probability: f64,
    pub grad_w: CMatrix,
}

/// `J = -P + weight·max(0, floor - F)²`, with `F` taken as 0 when `W = 0`.
pub(crate) fn penalized(w: &CMatrix, t: &CMatrix, floor: f64, weight: f64) -> PenalizedValue {
    let tau = t.norm_squared();
    let norm = w.norm_squared();
    let probability = norm / tau;
    if norm == 0.0 {
        let deficit = floor.max(0.0);
        return PenalizedValue {
            value: weight * deficit * deficit,
            fidelity: 0.0,
            probability: 0.0,
            grad_w: CMatrix::zeros(w.nrows(), w.ncols()),
        };
    }
    let z = hs_inner(t, w);
    let fidelity = z.norm_sqr() / (norm * tau);
    let deficit = (floor - fidelity).max(0.0);
    let value = -probability + weight * deficit * deficit;

    // ∂P/∂W = conj(W)/τ ; ∂F/∂W = conj(T)·conj(z)/(Nτ) − F·conj(W)/N.
    let scale_f = -2.0 * weight * deficit;
    let grad_w = CMatrix::from_fn(w.nrows(), w.ncols(), |i, j| {
        let wc = w[(i, j)].conj();
        let df = t[(i, j)].conj() * z.conj() / (norm * tau) - wc * (fidelity / norm);
        -wc / tau + df * scale_f
    });
    PenalizedValue {
        value,
        fidelity,
        probability,
        grad_w,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(entries: CMatrix) -> StateTransform {
        StateTransform {
            entries,
            basis_out: vec![],
            basis_in: vec![],
        }
    }

    #[test]
    fn target_examples() {
        let p0 = target(GateTarget::Phase { angle: 0.0 });
        assert_eq!(p0.entries, CMatrix::identity(2, 2));

        let h = target(GateTarget::Hadamard);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(h.entries[(1, 1)].re, -r);
        assert_eq!(h.entries[(0, 1)].re, r);

        let cz = target(GateTarget::Cz);
        assert_eq!(cz.entries.shape(), (10, 4));
        assert_eq!(cz.entries.norm_squared(), 4.0);
        assert_eq!(cz.entries[(3, 3)].re, -1.0);
        assert!(cz.entries.rows(4, 6).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn fidelity_examples() {
        let h = target(GateTarget::Hadamard);
        assert!((fidelity(&st(h.entries.clone()), &h).unwrap() - 1.0).abs() < 1e-15);

        let scaled = h.entries.clone() * Complex64::from_polar(0.3, 1.1);
        assert!((fidelity(&st(scaled), &h).unwrap() - 1.0).abs() < 1e-12);

        // Tr(H) = 0, so H and the identity are orthogonal.
        let id = target(GateTarget::Phase { angle: 0.0 });
        assert!(fidelity(&st(h.entries.clone()), &id).unwrap().abs() < 1e-15);

        // |Tr(diag(1, i))|² = 2 against Tr(I)·Tr(I) = 4.
        let s = target(GateTarget::Phase {
            angle: std::f64::consts::FRAC_PI_2,
        });
        assert!((fidelity(&st(id.entries.clone()), &s).unwrap() - 0.5).abs() < 1e-15);

        assert!(matches!(
            fidelity(&st(CMatrix::zeros(2, 2)), &h),
            Err(Error::UndefinedFidelity)
        ));
        assert!(matches!(
            fidelity(&st(CMatrix::zeros(3, 2)), &h),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn probability_examples() {
        let cz = target(GateTarget::Cz);
        assert_eq!(
            success_probability(&st(cz.entries.clone()), &cz).unwrap(),
            1.0
        );

        let scaled = cz.entries.clone() * Complex64::new(0.0, 0.5);
        assert!((success_probability(&st(scaled), &cz).unwrap() - 0.25).abs() < 1e-15);

        let mut single = CMatrix::zeros(10, 4);
        single[(7, 2)] = Complex64::new(0.5, 0.0);
        assert!((success_probability(&st(single), &cz).unwrap() - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn penalty_arithmetic() {
        let h = target(GateTarget::Hadamard).entries;
        let feasible = penalized(&h, &h, 0.9999, 1e4);
        assert!((feasible.value + 1.0).abs() < 1e-15);

        // W = identity against T = diag(1, i) sits at F = 1/2.
        let id = CMatrix::identity(2, 2);
        let s = target(GateTarget::Phase {
            angle: std::f64::consts::FRAC_PI_2,
        })
        .entries;
        let v = penalized(&id, &s, 0.51, 1e4);
        assert!((v.fidelity - 0.5).abs() < 1e-15);
        assert!((v.value - (-1.0 + 1.0)).abs() < 1e-9);
    }
}
