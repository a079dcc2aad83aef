//! Empirical covariance kernel of the characteristic-function moment functions.

use num_complex::Complex;

use crate::moments::empirical_char_fn;

/// `k̂(s,t) = n^{-1} Σ_j (e^{isX_j} − φ̂(s)) · conj(e^{itX_j} − φ̂(t))`.
pub fn cgmm_kernel(x: &[f64], s: f64, t: f64) -> Complex<f64> {
    if x.is_empty() {
        return Complex::new(0.0, 0.0);
    }
    let (ps, pt) = (empirical_char_fn(x, s), empirical_char_fn(x, t));
    let mut acc = Complex::new(0.0, 0.0);
    for &v in x {
        let a = Complex::new(0.0, s * v).exp() - ps;
        let b = Complex::new(0.0, t * v).exp() - pt;
        acc += a * b.conj();
    }
    acc / x.len() as f64
}

/// Kernel on all pairs of `ts`, row-major; `O(n·m + m²·n)` but with the
/// exponentials computed once.
pub fn kernel_matrix(x: &[f64], ts: &[f64]) -> Vec<Complex<f64>> {
    let m = ts.len();
    let n = x.len() as f64;
    let phis: Vec<Complex<f64>> = ts.iter().map(|&t| empirical_char_fn(x, t)).collect();
    let mut k = vec![Complex::new(0.0, 0.0); m * m];
    let mut e = vec![Complex::new(0.0, 0.0); m];
    for &v in x {
        for (i, &t) in ts.iter().enumerate() {
            let (s, c) = (t * v).sin_cos();
            e[i] = Complex::new(c, s) - phis[i];
        }
        for i in 0..m {
            let ei = e[i];
            for j in i..m {
                k[i * m + j] += ei * e[j].conj();
            }
        }
    }
    for i in 0..m {
        for j in i..m {
            let v = k[i * m + j] / n;
            k[i * m + j] = v;
            k[j * m + i] = v.conj();
        }
    }
    k
}
