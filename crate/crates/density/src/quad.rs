//! Numerical quadrature: Gauss–Legendre rules and globally adaptive
//! Gauss–Kronrod (7/15) integration of scalar and vector integrands.

use std::collections::BinaryHeap;
use std::cmp::Ordering;

use crate::error::{DensityError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for (xi, wi) in x.iter_mut().zip(w.iter_mut()) {
        *xi = mid + half * *xi;
        *wi *= half;
    }
    (x, w)
}

/// Tolerances for the adaptive integrators.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Vec<f64>,
    pub abs_error: f64,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: Vec<f64>,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<F: FnMut(f64, &mut [f64])>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [f64]) -> (Vec<f64>, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = vec![0.0; dim];
    let mut gauss = vec![0.0; dim];
    f(c, buf);
    for k in 0..dim {
        kron[k] = WGK[7] * buf[k];
        gauss[k] = WG[3] * buf[k];
    }
    let mut lo = vec![0.0; dim];
    for j in 0..7 {
        let dx = h * XGK[j];
        f(c - dx, &mut lo);
        f(c + dx, buf);
        for k in 0..dim {
            let s = lo[k] + buf[k];
            kron[k] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0f64;
    for k in 0..dim {
        kron[k] *= h;
        gauss[k] *= h;
        err = err.max((kron[k] - gauss[k]).abs());
    }
    (kron, err)
}

/// Adaptive integration of a vector-valued `f` over `[a, b]`, starting from
/// the subdivision given by `breaks` (interior points, ascending).
///
/// Convergence is declared when the summed error estimate is below
/// `max(abs_tol, rel_tol · max_k |I_k|)`.
pub fn integrate_vec<F: FnMut(f64, &mut [f64])>(
    mut f: F,
    dim: usize,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    let mut buf = vec![0.0; dim];
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    for w in pts.windows(2) {
        let (value, err) = gk15(&mut f, w[0], w[1], dim, &mut buf);
        evals += 15;
        heap.push(Piece { a: w[0], b: w[1], value, err });
    }
    loop {
        let mut total = vec![0.0; dim];
        let mut err = 0.0;
        for p in heap.iter() {
            for k in 0..dim {
                total[k] += p.value[k];
            }
            err += p.err;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let target = opts.abs_tol.max(opts.rel_tol * scale);
        if !err.is_finite() || total.iter().any(|v| !v.is_finite()) {
            return Err(DensityError::Quadrature { value: scale, error: err, reason: "non-finite integrand" });
        }
        if err <= target {
            return Ok(QuadResult { value: total, abs_error: err, evaluations: evals });
        }
        if heap.len() >= opts.max_intervals {
            return Err(DensityError::Quadrature { value: scale, error: err, reason: "subdivision limit reached" });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(DensityError::Quadrature { value: scale, error: err, reason: "interval too small to bisect" });
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, e) = gk15(&mut f, lo, hi, dim, &mut buf);
            evals += 15;
            heap.push(Piece { a: lo, b: hi, value, err: e });
        }
    }
}

/// Adaptive integration of a scalar `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], opts: &QuadOptions) -> Result<f64> {
    integrate_vec(|x, out: &mut [f64]| out[0] = f(x), 1, a, b, breaks, opts).map(|r| r.value[0])
}

/// Integral of `f` over `[a, ∞)` through the map `x = a + s/(1 − s)`.
pub fn integrate_to_inf<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: &QuadOptions) -> Result<f64> {
    integrate(
        |s| {
            let one_minus = 1.0 - s;
            let x = a + s / one_minus;
            let v = f(x) / (one_minus * one_minus);
            if v.is_finite() { v } else { 0.0 }
        },
        0.0,
        1.0,
        &[0.5, 0.9, 0.99],
        opts,
    )
}
