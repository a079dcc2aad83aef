//! Box-constrained limited-memory quasi-Newton minimisation with
//! finite-difference gradients.
//!
//! The search direction is the L-BFGS two-loop product restricted to the
//! free variables (those not held at a bound by the sign of the gradient);
//! steps follow the projected path `P(x + s·d)` with Armijo backtracking.
//! Non-finite objective values are treated as infeasible and backtracked.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimOptions {
    pub max_iter: usize,
    /// Number of stored correction pairs.
    pub memory: usize,
    /// Stop when the relative decrease of the objective falls below this.
    pub f_tol: f64,
    /// Stop when the sup-norm of the projected gradient falls below this.
    pub pg_tol: f64,
    /// Relative finite-difference step, applied as `step·max(|x_i|, 1)`.
    pub grad_step: f64,
}

impl Default for OptimOptions {
    fn default() -> Self {
        Self { max_iter: 200, memory: 8, f_tol: 2.2e-9, pg_tol: 1e-5, grad_step: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub message: String,
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &l), &u) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(l, u);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    /// Central differences where the box allows, one-sided otherwise.
    fn gradient(&mut self, x: &[f64], fx: f64, lower: &[f64], upper: &[f64], step: f64) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        let mut xs = x.to_vec();
        for i in 0..x.len() {
            let h = step * x[i].abs().max(1.0);
            let up = x[i] + h <= upper[i];
            let down = x[i] - h >= lower[i];
            let mut fp = f64::INFINITY;
            let mut fm = f64::INFINITY;
            if up {
                xs[i] = x[i] + h;
                fp = self.eval(&xs);
            }
            if down {
                xs[i] = x[i] - h;
                fm = self.eval(&xs);
            }
            xs[i] = x[i];
            g[i] = match (fp.is_finite(), fm.is_finite()) {
                (true, true) => (fp - fm) / (2.0 * h),
                (true, false) => (fp - fx) / h,
                (false, true) => (fx - fm) / h,
                (false, false) => 0.0,
            };
        }
        g
    }
}

/// Components held at a bound: at the lower bound with a positive gradient
/// or at the upper bound with a negative one.
fn active_set(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> Vec<bool> {
    x.iter()
        .zip(g)
        .zip(lower.iter().zip(upper))
        .map(|((&x, &g), (&l, &u))| {
            let tol = 1e-12 * x.abs().max(1.0);
            (x <= l + tol && g > 0.0) || (x >= u - tol && g < 0.0)
        })
        .collect()
}

fn projected_gradient_norm(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    x.iter()
        .zip(g)
        .zip(lower.iter().zip(upper))
        .map(|((&x, &g), (&l, &u))| ((x - g).clamp(l, u) - x).abs())
        .fold(0.0, f64::max)
}

/// Minimises `f` over the box `[lower, upper]` starting from `x0` (projected
/// into the box). Infinite bounds are allowed.
pub fn minimize<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], lower: &[f64], upper: &[f64], opts: &OptimOptions) -> OptimResult {
    let n = x0.len();
    assert_eq!(lower.len(), n, "lower bound dimension");
    assert_eq!(upper.len(), n, "upper bound dimension");
    let mut obj = Counted { f, evaluations: 0 };
    let mut x = x0.to_vec();
    project(&mut x, lower, upper);
    let mut fx = obj.eval(&x);
    if !fx.is_finite() {
        return OptimResult {
            x,
            f: fx,
            iterations: 0,
            evaluations: obj.evaluations,
            converged: false,
            message: "objective is not finite at the starting point".into(),
        };
    }
    let mut g = obj.gradient(&x, fx, lower, upper, opts.grad_step);
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut message = String::from("iteration limit reached");
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        if projected_gradient_norm(&x, &g, lower, upper) < opts.pg_tol {
            converged = true;
            message = "projected gradient below tolerance".into();
            break;
        }
        iterations += 1;
        let active = active_set(&x, &g, lower, upper);
        let masked = |v: &mut Vec<f64>| {
            for (vi, &a) in v.iter_mut().zip(&active) {
                if a {
                    *vi = 0.0;
                }
            }
        };

        let mut accepted = None;
        for attempt in 0..2 {
            let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
            masked(&mut d);
            if attempt == 0 && !memory.is_empty() {
                // two-loop recursion on the free subspace
                let mut q: Vec<f64> = g.clone();
                masked(&mut q);
                let mut alphas = Vec::with_capacity(memory.len());
                for (s, y, rho) in memory.iter().rev() {
                    let a = rho * dot(s, &q);
                    for (qi, yi) in q.iter_mut().zip(y) {
                        *qi -= a * yi;
                    }
                    alphas.push(a);
                }
                let (s_last, y_last, _) = memory.back().expect("memory is non-empty");
                let gamma = dot(s_last, y_last) / dot(y_last, y_last);
                for qi in q.iter_mut() {
                    *qi *= gamma;
                }
                for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
                    let b = rho * dot(y, &q);
                    for (qi, si) in q.iter_mut().zip(s) {
                        *qi += (a - b) * si;
                    }
                }
                masked(&mut q);
                d = q.iter().map(|v| -v).collect();
            } else {
                // unscaled steepest descent: cap the first trial step
                let gmax = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                if gmax > 0.0 {
                    let c = (0.1 * scale / gmax).min(1.0);
                    for di in d.iter_mut() {
                        *di *= c;
                    }
                }
            }
            let slope = dot(&g, &d);
            if !(slope < 0.0) {
                memory.clear();
                continue;
            }
            let mut step = 1.0;
            for _ in 0..40 {
                let mut xn: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
                project(&mut xn, lower, upper);
                let dec: f64 = g.iter().zip(xn.iter().zip(&x)).map(|(gi, (a, b))| gi * (a - b)).sum();
                let fnew = obj.eval(&xn);
                if fnew.is_finite() && fnew <= fx + 1e-4 * dec.min(0.0) && xn != x {
                    accepted = Some((xn, fnew));
                    break;
                }
                step *= 0.5;
            }
            if accepted.is_some() {
                break;
            }
            memory.clear();
        }

        let Some((xn, fnew)) = accepted else {
            message = "line search failed".into();
            converged = projected_gradient_norm(&x, &g, lower, upper) < opts.pg_tol.sqrt();
            break;
        };
        let gn = obj.gradient(&xn, fnew, lower, upper, opts.grad_step);
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if memory.len() == opts.memory {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
        let rel = (fx - fnew) / fx.abs().max(fnew.abs()).max(1.0);
        x = xn;
        fx = fnew;
        g = gn;
        if rel <= opts.f_tol {
            converged = true;
            message = "relative reduction below tolerance".into();
            break;
        }
    }
    OptimResult { x, f: fx, iterations, evaluations: obj.evaluations, converged, message }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_unconstrained() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let inf = f64::INFINITY;
        let r = minimize(f, &[-1.2, 1.0], &[-inf, -inf], &[inf, inf], &OptimOptions { f_tol: 1e-15, ..Default::default() });
        assert!(r.converged, "{}", r.message);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn active_bound() {
        // minimum of (x-2)² + (y+1)² on [0,1]×[0,1] is (1, 0)
        let f = |x: &[f64]| (x[0] - 2.0).powi(2) + (x[1] + 1.0).powi(2);
        let r = minimize(f, &[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0], &OptimOptions::default());
        assert_eq!(r.x, vec![1.0, 0.0]);
        assert!(r.converged);
    }

    #[test]
    fn infeasible_region_is_avoided() {
        // objective undefined for x < 0.2
        let f = |x: &[f64]| if x[0] < 0.2 { f64::NAN } else { (x[0] - 0.3).powi(2) };
        let r = minimize(f, &[3.0], &[0.0], &[10.0], &OptimOptions::default());
        assert!((r.x[0] - 0.3).abs() < 1e-4, "{:?}", r.x);
    }

    #[test]
    fn nonfinite_start() {
        let r = minimize(|_: &[f64]| f64::INFINITY, &[1.0], &[0.0], &[2.0], &OptimOptions::default());
        assert!(!r.converged);
        assert_eq!(r.iterations, 0);
    }
}
