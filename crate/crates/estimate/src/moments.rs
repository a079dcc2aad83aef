//! Empirical characteristic function and sample moments.

use num_complex::Complex;

/// `n^{-1} Σ_j e^{itX_j}`.
pub fn empirical_char_fn(x: &[f64], t: f64) -> Complex<f64> {
    if x.is_empty() {
        return Complex::new(1.0, 0.0);
    }
    let (mut re, mut im) = (0.0, 0.0);
    for &v in x {
        let (s, c) = (t * v).sin_cos();
        re += c;
        im += s;
    }
    let n = x.len() as f64;
    Complex::new(re / n, im / n)
}

/// Raw sample moments `n^{-1} Σ X^k`, `k = 1..=p`.
pub fn raw_moments(x: &[f64], p: usize) -> Vec<f64> {
    let mut m = vec![0.0; p];
    for &v in x {
        let mut pow = 1.0;
        for mk in m.iter_mut() {
            pow *= v;
            *mk += pow;
        }
    }
    let n = x.len() as f64;
    m.iter().map(|s| s / n).collect()
}

/// First four sample cumulants from central moments (plug-in, not k-statistics).
pub fn sample_cumulants(x: &[f64]) -> [f64; 4] {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    [mean, m2, m3, m4 - 3.0 * m2 * m2]
}
