//! Starting values from sample cumulants.

use tempered_core::special::gamma;
use tempered_core::{Bounds, Family, ParamVector, Params};

use crate::error::{EstimateError, Result};
use crate::moments::sample_cumulants;

fn finite_positive(v: f64, fallback: f64) -> f64 {
    if v.is_finite() && v > 0.0 {
        v
    } else {
        fallback
    }
}

/// TSS `(δ, λ)` matching the sample mean and variance for a given `α`.
fn tss_scale(alpha: f64, k1: f64, k2: f64) -> (f64, f64) {
    let lambda = finite_positive((1.0 - alpha) * k1 / k2, 1.0);
    let delta = finite_positive(k1 * lambda.powf(1.0 - alpha) / gamma(1.0 - alpha), 1.0);
    (delta, lambda)
}

/// Cumulant matching for TSS: `κ₃κ₁/κ₂² = (2−α)/(1−α)`.
fn tss_start(k: &[f64; 4]) -> [f64; 3] {
    let r = k[2] * k[0] / (k[1] * k[1]);
    let alpha = if r.is_finite() && r > 2.0 { ((r - 2.0) / (r - 1.0)).clamp(0.05, 0.95) } else { 0.5 };
    let (delta, lambda) = tss_scale(alpha, k[0], k[1]);
    [alpha, delta, lambda]
}

/// TS' from `κ₄κ₂/κ₃² = (3−α)/(2−α)`, kept away from `α = 1`.
fn ts_prime_start(k: &[f64; 4]) -> [f64; 3] {
    let r = k[3] * k[1] / (k[2] * k[2]);
    let mut alpha = if r.is_finite() && r > 1.5 { ((2.0 * r - 3.0) / (r - 1.0)).clamp(0.1, 1.9) } else { 0.5 };
    if (alpha - 1.0).abs() < 0.05 {
        alpha = 0.95;
    }
    let lambda = finite_positive((2.0 - alpha) * k[1] / k[2].abs(), 1.0);
    let delta = finite_positive(k[1] * lambda.powf(2.0 - alpha) / gamma(2.0 - alpha), 1.0);
    [alpha, delta, lambda]
}

/// Symmetric CTS matching variance and excess kurtosis for a given `α`, with
/// the scales split to match the third cumulant.
fn cts_start(k: &[f64; 4], alpha: f64) -> [f64; 6] {
    let lambda = if k[3] > 0.0 { ((3.0 - alpha) * (2.0 - alpha) * k[1] / k[3]).sqrt() } else { 1.0 / k[1].sqrt() };
    let lambda = finite_positive(lambda, 1.0);
    let delta = finite_positive(k[1] * lambda.powf(2.0 - alpha) / (2.0 * gamma(2.0 - alpha)), 1.0);
    let diff = k[2] * lambda.powf(3.0 - alpha) / gamma(3.0 - alpha);
    let diff = if diff.is_finite() { diff.clamp(-1.8 * delta, 1.8 * delta) } else { 0.0 };
    [alpha, delta + 0.5 * diff, delta - 0.5 * diff, lambda, lambda, k[0]]
}

/// `α` solving `κ₆κ₂/κ₄² = (5−α)(4−α)/((3−α)(2−α))`, the scale-free ratio of
/// the symmetric CTS law; `1` when the sample ratio is out of range.
fn cts_alpha(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let mut m = [0.0; 7];
    for &v in x {
        let d = v - mean;
        let mut p = 1.0;
        for mk in m.iter_mut() {
            *mk += p;
            p *= d;
        }
    }
    let m: Vec<f64> = m.iter().map(|v| v / n).collect();
    let k2 = m[2];
    let k4 = m[4] - 3.0 * m[2] * m[2];
    let k6 = m[6] - 15.0 * m[4] * m[2] - 10.0 * m[3] * m[3] + 30.0 * m[2].powi(3);
    let r = k6 * k2 / (k4 * k4);
    let ratio = |a: f64| (5.0 - a) * (4.0 - a) / ((3.0 - a) * (2.0 - a));
    let (lo, hi) = (0.2, 1.9);
    if !(r.is_finite() && k4 > 0.0) || r <= ratio(lo) {
        return if r.is_finite() && k4 > 0.0 { lo } else { 1.0 };
    }
    if r >= ratio(hi) {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if ratio(mid) < r {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// NTS with `α = 0.5`, `β = 0`: `κ₂ = E Y`, `κ₄ = 3 Var Y`.
fn nts_start(k: &[f64; 4]) -> [f64; 5] {
    let alpha = 0.5;
    let lambda = if k[3] > 0.0 { 3.0 * (1.0 - alpha) * k[1] / k[3] } else { 1.0 };
    let lambda = finite_positive(lambda, 1.0);
    let delta = finite_positive(k[1] * lambda.powf(1.0 - alpha) / gamma(1.0 - alpha), 1.0);
    [alpha, 0.0, delta, lambda, k[0]]
}

/// Moves a start strictly inside the box (one percent of the gap or of the
/// value away from finite bounds).
fn interior(bounds: &Bounds, v: &mut [f64]) {
    for ((x, &lo), &hi) in v.iter_mut().zip(&bounds.lower).zip(&bounds.upper) {
        let margin = if lo.is_finite() && hi.is_finite() { 0.01 * (hi - lo) } else { 0.01 * x.abs().max(1e-3) };
        let lo_in = if lo.is_finite() { lo + margin.min(0.5 * (hi - lo)) } else { lo };
        let hi_in = if hi.is_finite() { hi - margin.min(0.5 * (hi - lo)) } else { hi };
        *x = x.clamp(lo_in, hi_in);
    }
}

/// Cumulant-matching start followed by a fixed-`α` fallback start.
pub fn starting_values(x: &[f64], family: Family, bounds: &Bounds) -> Result<Vec<Params>> {
    if x.len() < 4 {
        return Err(EstimateError::SampleTooSmall { n: x.len(), needed: 4 });
    }
    let k = sample_cumulants(x);
    if !(k[1] > 0.0) {
        return Err(EstimateError::NoStart("sample has zero variance".into()));
    }
    let raw: Vec<Vec<f64>> = match family {
        Family::Tss => {
            let (d, l) = tss_scale(0.5, k[0].abs().max(1e-3), k[1]);
            vec![tss_start(&k).to_vec(), vec![0.5, d, l]]
        }
        Family::TsPrime => vec![ts_prime_start(&k).to_vec(), vec![0.5, k[1].sqrt(), 1.0 / k[1].sqrt()]],
        Family::Cts => vec![cts_start(&k, cts_alpha(x)).to_vec(), cts_start(&k, 0.8).to_vec()],
        Family::Nts => {
            let mut fallback = nts_start(&k).to_vec();
            fallback[0] = 0.3;
            fallback[3] = 1.0 / k[1].sqrt();
            fallback[2] = finite_positive(k[1] * fallback[3].powf(0.7) / gamma(0.7), 1.0);
            vec![nts_start(&k).to_vec(), fallback]
        }
    };
    let mut out = Vec::with_capacity(raw.len());
    for mut v in raw {
        interior(bounds, &mut v);
        if let Ok(p) = ParamVector::new(family, &v) {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err(EstimateError::NoStart(format!("no valid {family} start inside the bounds")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempered_core::cumulants;

    #[test]
    fn tss_start_inverts_population_cumulants() {
        let theta = ParamVector::tss(0.4, 1.3, 0.8).unwrap();
        let c = cumulants(&theta, 3).unwrap();
        let s = tss_start(&[c[0], c[1], c[2], 0.0]);
        assert!((s[0] - 0.4).abs() < 1e-10 && (s[1] - 1.3).abs() < 1e-10 && (s[2] - 0.8).abs() < 1e-10, "{s:?}");
    }

    #[test]
    fn nts_start_inverts_symmetric_cumulants() {
        // β = 0: κ₂ = E Y = Γ(1−α)δλ^{α−1}, κ₄ = 3 Var Y
        let (a, d, l) = (0.5, 1.2, 0.7);
        let ey = gamma(1.0 - a) * d * f64::powf(l, a - 1.0);
        let vy = gamma(2.0 - a) * d * f64::powf(l, a - 2.0);
        let s = nts_start(&[0.3, ey, 0.0, 3.0 * vy]);
        assert!((s[2] - d).abs() < 1e-10 && (s[3] - l).abs() < 1e-10 && s[4] == 0.3);
    }
}
