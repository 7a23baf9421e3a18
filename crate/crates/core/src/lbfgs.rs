//! Limited-memory BFGS with a strong-Wolfe line search.

use std::collections::VecDeque;

#[derive(Clone, Copy, Debug)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iters: usize,
    /// Stop when `‖g‖_∞ < grad_tol`.
    pub grad_tol: f64,
    /// Stop when the relative decrease over one iteration is below this.
    pub rel_tol: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self {
            memory: 12,
            max_iters: 2000,
            grad_tol: 1e-9,
            rel_tol: 1e-13,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LbfgsOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

struct Counter<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(&[f64], &mut [f64]) -> f64> Counter<F> {
    fn call(&mut self, x: &[f64], g: &mut [f64]) -> f64 {
        self.evals += 1;
        (self.f)(x, g)
    }
}

/// Minimizes `f`, which returns the value and writes the gradient.
pub fn minimize<F>(f: F, x0: Vec<f64>, opts: &LbfgsOptions) -> LbfgsOutcome
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut f = Counter { f, evals: 0 };
    let mut x = x0;
    let mut g = vec![0.0; n];
    let mut value = f.call(&x, &mut g);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut dir = vec![0.0; n];
    let mut alpha_buf = vec![0.0; opts.memory];
    let mut iterations = 0;

    while iterations < opts.max_iters {
        if !value.is_finite() || inf_norm(&g) < opts.grad_tol {
            break;
        }
        // Two-loop recursion.
        dir.iter_mut().zip(&g).for_each(|(d, gi)| *d = -gi);
        for (i, (s, y, rho)) in history.iter().enumerate().rev() {
            let a = rho * dot(s, &dir);
            alpha_buf[i] = a;
            dir.iter_mut().zip(y).for_each(|(d, yi)| *d -= a * yi);
        }
        let gamma = history
            .back()
            .map(|(s, y, _)| dot(s, y) / dot(y, y))
            .unwrap_or_else(|| 1.0 / inf_norm(&g).max(1e-12));
        dir.iter_mut().for_each(|d| *d *= gamma);
        for (i, (s, y, rho)) in history.iter().enumerate() {
            let b = rho * dot(y, &dir);
            dir.iter_mut()
                .zip(s)
                .for_each(|(d, si)| *d += (alpha_buf[i] - b) * si);
        }

        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            // Curvature information went bad; restart from steepest descent.
            history.clear();
            let scale = 1.0 / inf_norm(&g).max(1e-12);
            dir.iter_mut().zip(&g).for_each(|(d, gi)| *d = -gi * scale);
            slope = dot(&g, &dir);
        }

        let Some((_, new_value, new_x, new_g)) = line_search(&mut f, &x, value, &dir, slope) else {
            if history.is_empty() {
                break;
            }
            history.clear();
            continue;
        };
        iterations += 1;

        let s: Vec<f64> = new_x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = new_g.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-300 {
            if history.len() == opts.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        let decrease = value - new_value;
        x = new_x;
        g = new_g;
        value = new_value;
        if decrease.abs() <= opts.rel_tol * value.abs().max(1e-8) {
            break;
        }
    }
    LbfgsOutcome {
        x,
        value,
        iterations,
        evaluations: f.evals,
    }
}

const C1: f64 = 1e-4;
const C2: f64 = 0.9;
const MAX_LS: usize = 30;

type Trial = (f64, f64, Vec<f64>, Vec<f64>);

fn line_search<F>(f: &mut Counter<F>, x: &[f64], f0: f64, dir: &[f64], slope0: f64) -> Option<Trial>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x.len();
    let mut eval = |f: &mut Counter<F>, a: f64| -> Trial {
        let xt: Vec<f64> = x.iter().zip(dir).map(|(xi, di)| xi + a * di).collect();
        let mut gt = vec![0.0; n];
        let ft = f.call(&xt, &mut gt);
        (a, ft, xt, gt)
    };

    let mut prev: Option<Trial> = None;
    let mut prev_slope = slope0;
    let mut a = 1.0;
    for i in 0..MAX_LS {
        let trial = eval(f, a);
        let slope = dot(&trial.3, dir);
        let (prev_a, prev_f) = prev.as_ref().map(|t| (t.0, t.1)).unwrap_or((0.0, f0));
        if !trial.1.is_finite() || trial.1 > f0 + C1 * a * slope0 || (i > 0 && trial.1 >= prev_f) {
            return zoom(
                f,
                &mut eval,
                f0,
                slope0,
                dir,
                (prev_a, prev_f, prev_slope, prev),
                (a, trial.1, slope, Some(trial)),
            );
        }
        if slope.abs() <= -C2 * slope0 {
            return Some(trial);
        }
        if slope >= 0.0 {
            return zoom(
                f,
                &mut eval,
                f0,
                slope0,
                dir,
                (a, trial.1, slope, Some(trial)),
                (prev_a, prev_f, prev_slope, prev),
            );
        }
        prev_slope = slope;
        prev = Some(trial);
        a *= 2.0;
    }
    prev
}

type Bracket = (f64, f64, f64, Option<Trial>);

/// Cubic interpolation minimizer on `[a, b]`, falling back to bisection.
fn cubic(a: f64, fa: f64, ga: f64, b: f64, fb: f64, gb: f64) -> f64 {
    let d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
    let disc = d1 * d1 - ga * gb;
    let mid = 0.5 * (a + b);
    if disc < 0.0 {
        return mid;
    }
    let d2 = (b - a).signum() * disc.sqrt();
    let t = b - (b - a) * (gb + d2 - d1) / (gb - ga + 2.0 * d2);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let margin = 0.1 * (hi - lo);
    if !t.is_finite() || t < lo + margin || t > hi - margin {
        mid
    } else {
        t
    }
}

fn zoom<F, E>(
    f: &mut Counter<F>,
    eval: &mut E,
    f0: f64,
    slope0: f64,
    dir: &[f64],
    mut lo: Bracket,
    mut hi: Bracket,
) -> Option<Trial>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
    E: FnMut(&mut Counter<F>, f64) -> Trial,
{
    for _ in 0..MAX_LS {
        let a = if hi.1.is_finite() {
            cubic(lo.0, lo.1, lo.2, hi.0, hi.1, hi.2)
        } else {
            0.5 * (lo.0 + hi.0)
        };
        let trial = eval(f, a);
        let slope = dot(&trial.3, dir);
        if !trial.1.is_finite() || trial.1 > f0 + C1 * a * slope0 || trial.1 >= lo.1 {
            hi = (a, trial.1, slope, Some(trial));
        } else {
            if slope.abs() <= -C2 * slope0 {
                return Some(trial);
            }
            if slope * (hi.0 - lo.0) >= 0.0 {
                hi = lo;
            }
            lo = (a, trial.1, slope, Some(trial));
        }
        if (hi.0 - lo.0).abs() < 1e-14 * lo.0.abs().max(1.0) {
            break;
        }
    }
    // Accept any sufficient decrease found so far.
    lo.3.filter(|t| t.1 < f0)
}
