//! Characteristic functions, cumulant generating functions and cumulants.
//!
//! Complex powers are evaluated as `exp(α · Log z)` with the principal
//! logarithm. Every base that appears (`λ ∓ it`, `λ − itβ + t²/2`) has
//! positive real part, so the branch cut is never crossed.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::params::{CtsParams, Family, NtsParams, ParamVector, TssParams};
use crate::scalar::Real;
use crate::special::gamma;

/// `α` within this distance of 1 uses the logarithmic `α = 1` form.
pub const ALPHA_ONE_TOL: f64 = 1e-8;

#[inline]
fn cpow<T: Real>(z: Complex<T>, a: T) -> Complex<T> {
    (z.ln() * a).exp()
}

#[inline]
fn rpow<T: Real>(x: T, a: T) -> Complex<T> {
    // same evaluation path as cpow so that log φ(0) cancels exactly
    cpow(Complex::new(x, T::zero()), a)
}

#[inline]
fn near_one<T: Real>(alpha: T) -> bool {
    (alpha - T::one()).abs() < T::lit(ALPHA_ONE_TOL)
}

/// `log φ` of the subordinator `TSS(α, δ, λ)`.
pub fn tss_log_cf<T: Real>(p: &TssParams<T>, t: T) -> Complex<T> {
    let base = Complex::new(p.lambda, -t);
    (cpow(base, p.alpha) - rpow(p.lambda, p.alpha)) * (p.delta * gamma(-p.alpha))
}

/// `log φ` of the centered law `TS'(α, δ, λ)`; uses the log form at `α = 1`.
pub fn ts_prime_log_cf<T: Real>(p: &TssParams<T>, t: T) -> Complex<T> {
    let (a, d, l) = (p.alpha, p.delta, p.lambda);
    let it = Complex::new(T::zero(), t);
    let base = Complex::new(l, -t);
    if near_one(a) {
        // δ((λ − it) log(1 − it/λ) + it)
        let lg = (Complex::new(T::one(), -t / l)).ln();
        return (base * lg + it) * d;
    }
    let drift = it * (a * l.powf(a - T::one()));
    (cpow(base, a) - rpow(l, a) + drift) * (d * gamma(-a))
}

/// `log φ` of `CTS(α, δ₊, δ₋, λ₊, λ₋, μ)`.
pub fn cts_log_cf<T: Real>(p: &CtsParams<T>, t: T) -> Complex<T> {
    let plus = TssParams::new(p.alpha, p.delta_plus, p.lambda_plus);
    let minus = TssParams::new(p.alpha, p.delta_minus, p.lambda_minus);
    Complex::new(T::zero(), t * p.mu) + ts_prime_log_cf(&plus, t) + ts_prime_log_cf(&minus, -t)
}

/// `log φ` of `NTS(α, β, δ, λ, μ)`.
pub fn nts_log_cf<T: Real>(p: &NtsParams<T>, t: T) -> Complex<T> {
    let half = T::lit(0.5);
    let base = Complex::new(p.lambda + half * t * t, -t * p.beta);
    let core = (cpow(base, p.alpha) - rpow(p.lambda, p.alpha)) * (p.delta * gamma(-p.alpha));
    Complex::new(T::zero(), t * p.mu) + core
}

impl<T: Real> ParamVector<T> {
    /// `log φ_θ(t)` without re-validating `θ`.
    pub fn log_cf(&self, t: T) -> Complex<T> {
        match self {
            ParamVector::Tss(p) => tss_log_cf(p, t),
            ParamVector::TsPrime(p) => ts_prime_log_cf(p, t),
            ParamVector::Cts(p) => cts_log_cf(p, t),
            ParamVector::Nts(p) => nts_log_cf(p, t),
        }
    }

    /// `φ_θ(t)` without re-validating `θ`.
    pub fn cf(&self, t: T) -> Complex<T> {
        self.log_cf(t).exp()
    }
}

/// Characteristic function `φ_θ(t) = E[exp(itX)]`.
pub fn char_fn<T: Real>(theta: &ParamVector<T>, t: T) -> Result<Complex<T>> {
    theta.validate()?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("t = {} is not finite", t.as_f64())));
    }
    Ok(theta.cf(t))
}

fn ts_prime_cgf_real<T: Real>(a: T, d: T, l: T, t: T) -> T {
    let rest = l - t;
    if near_one(a) {
        // δ((λ − t) log(1 − t/λ) + t)
        let xlogx = if rest == T::zero() { T::zero() } else { rest * (rest / l).ln() };
        return d * (xlogx + t);
    }
    d * gamma(-a) * (rest.powf(a) - l.powf(a) + t * a * l.powf(a - T::one()))
}

/// Admissible interval of the cumulant generating function.
pub fn cgf_domain<T: Real>(theta: &ParamVector<T>) -> Result<(T, T)> {
    match *theta {
        ParamVector::Tss(p) | ParamVector::TsPrime(p) => Ok((T::neg_infinity(), p.lambda)),
        ParamVector::Cts(p) => Ok((-p.lambda_minus, p.lambda_plus)),
        ParamVector::Nts(_) => Err(Error::UnsupportedFamily { operation: "cumulant generating function", family: Family::Nts }),
    }
}

/// Cumulant generating function `ψ_θ(t) = log E[exp(tX)]`.
///
/// Defined for TSS/TS' on `t ≤ λ` and for CTS on `[−λ₋, λ₊]`.
pub fn cgf<T: Real>(theta: &ParamVector<T>, t: T) -> Result<T> {
    theta.validate()?;
    let (lo, hi) = cgf_domain(theta)?;
    if !(t >= lo && t <= hi) {
        return Err(Error::CgfDomain { t: t.as_f64(), lower: lo.as_f64(), upper: hi.as_f64() });
    }
    Ok(match *theta {
        ParamVector::Tss(p) => {
            p.delta * gamma(-p.alpha) * ((p.lambda - t).powf(p.alpha) - p.lambda.powf(p.alpha))
        }
        ParamVector::TsPrime(p) => ts_prime_cgf_real(p.alpha, p.delta, p.lambda, t),
        ParamVector::Cts(p) => {
            t * p.mu
                + ts_prime_cgf_real(p.alpha, p.delta_plus, p.lambda_plus, t)
                + ts_prime_cgf_real(p.alpha, p.delta_minus, p.lambda_minus, -t)
        }
        ParamVector::Nts(_) => unreachable!("rejected by cgf_domain"),
    })
}

/// `m`-th cumulant `κ_m` (TSS and CTS only).
pub fn cumulant<T: Real>(theta: &ParamVector<T>, m: u32) -> Result<T> {
    theta.validate()?;
    if m == 0 {
        return Err(Error::InvalidArgument("cumulant order must be at least 1".into()));
    }
    let mf = T::lit(m as f64);
    match *theta {
        ParamVector::Tss(p) => Ok(gamma(mf - p.alpha) * p.delta / p.lambda.powf(mf - p.alpha)),
        ParamVector::Cts(p) => {
            if m == 1 {
                return Ok(p.mu);
            }
            let g = gamma(mf - p.alpha);
            let sign = if m % 2 == 0 { T::one() } else { -T::one() };
            Ok(g * (p.delta_plus / p.lambda_plus.powf(mf - p.alpha)
                + sign * p.delta_minus / p.lambda_minus.powf(mf - p.alpha)))
        }
        ParamVector::TsPrime(_) | ParamVector::Nts(_) => {
            Err(Error::UnsupportedFamily { operation: "cumulants", family: theta.family() })
        }
    }
}

/// First `p` cumulants `κ₁..κ_p`.
pub fn cumulants<T: Real>(theta: &ParamVector<T>, p: u32) -> Result<Vec<T>> {
    (1..=p).map(|m| cumulant(theta, m)).collect()
}

/// Mean and variance of the law, available for every family.
pub fn mean_variance<T: Real>(theta: &ParamVector<T>) -> (T, T) {
    let one = T::one();
    let two = T::lit(2.0);
    match *theta {
        ParamVector::Tss(p) => {
            let m = gamma(one - p.alpha) * p.delta * p.lambda.powf(p.alpha - one);
            let v = gamma(two - p.alpha) * p.delta * p.lambda.powf(p.alpha - two);
            (m, v)
        }
        ParamVector::TsPrime(p) => (T::zero(), gamma(two - p.alpha) * p.delta * p.lambda.powf(p.alpha - two)),
        ParamVector::Cts(p) => {
            let g = gamma(two - p.alpha);
            let v = g * (p.delta_plus * p.lambda_plus.powf(p.alpha - two) + p.delta_minus * p.lambda_minus.powf(p.alpha - two));
            (p.mu, v)
        }
        ParamVector::Nts(p) => {
            let ey = gamma(one - p.alpha) * p.delta * p.lambda.powf(p.alpha - one);
            let vy = gamma(two - p.alpha) * p.delta * p.lambda.powf(p.alpha - two);
            (p.mu + p.beta * ey, ey + p.beta * p.beta * vy)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tss(a: f64, d: f64, l: f64) -> ParamVector<f64> {
        ParamVector::tss(a, d, l).unwrap()
    }

    #[test]
    fn tss_cf_at_zero_is_one() {
        let c = char_fn(&tss(0.5, 1.0, 1.0), 0.0).unwrap();
        assert_eq!(c, Complex::new(1.0, 0.0));
    }

    #[test]
    fn tss_cf_at_one_independent_evaluation() {
        // exp(Γ(−1/2)((1 − i)^{1/2} − 1)) with (1 − i)^{1/2} = 2^{1/4} e^{−iπ/8}
        let r = 2f64.powf(0.25);
        let ang = -std::f64::consts::PI / 8.0;
        let sq = Complex::new(r * ang.cos(), r * ang.sin());
        let g = -2.0 * std::f64::consts::PI.sqrt();
        let expected = ((sq - 1.0) * g).exp();
        let got = char_fn(&tss(0.5, 1.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(got.re, expected.re, epsilon = 1e-14);
        assert_relative_eq!(got.im, expected.im, epsilon = 1e-14);
        assert!((got.re - -0.0300).abs() < 5e-4 && (got.im - 0.7042).abs() < 5e-4);
    }

    #[test]
    fn cts_location_factorises() {
        let shifted = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let base = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        for &t in &[-3.0, -0.4, 0.7, 2.5] {
            let lhs = shifted.cf(t);
            let rhs = Complex::new(0.0, t).exp() * base.cf(t);
            assert_relative_eq!(lhs.re, rhs.re, epsilon = 1e-14);
            assert_relative_eq!(lhs.im, rhs.im, epsilon = 1e-14);
        }
    }

    #[test]
    fn cts_alpha_one_branch_is_continuous() {
        for &t in &[-10.0, -3.3, -0.5, 0.2, 1.0, 4.0, 10.0] {
            let at = |a: f64| ParamVector::cts(a, 1.3, 0.7, 1.1, 2.0, 0.2).unwrap().cf(t);
            let c1 = at(1.0);
            assert!((at(1.0 + 1e-6) - c1).norm() <= 1e-4);
            assert!((at(1.0 - 1e-6) - c1).norm() <= 1e-4);
        }
    }

    #[test]
    fn cgf_values() {
        let p = tss(0.5, 1.0, 1.0);
        assert_eq!(cgf(&p, 0.0).unwrap(), 0.0);
        let expected = -2.0 * std::f64::consts::PI.sqrt() * (2f64.sqrt() - 1.0);
        assert_relative_eq!(cgf(&p, -1.0).unwrap(), expected, max_relative = 1e-14);
        assert!((expected - -1.4683).abs() < 1e-4);
        assert!(matches!(cgf(&p, 1.5), Err(Error::CgfDomain { .. })));
        // the boundary λ itself is admissible
        assert!(cgf(&p, 1.0).unwrap().is_finite());
        let nts = ParamVector::nts(0.5, 0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(cgf(&nts, 0.1), Err(Error::UnsupportedFamily { .. })));
    }

    #[test]
    fn cgf_cts_alpha_one_endpoint() {
        let p = ParamVector::cts(1.0f64, 1.0, 1.0, 2.0, 3.0, 0.0).unwrap();
        assert!(cgf(&p, 2.0).unwrap().is_finite());
        assert!(cgf(&p, -3.0).unwrap().is_finite());
        assert!(cgf(&p, 2.0 + 1e-9).is_err());
    }

    #[test]
    fn cumulant_values() {
        let p = tss(0.5, 1.0, 1.0);
        assert_relative_eq!(cumulant(&p, 1).unwrap(), 1.772_453_850_905_516, max_relative = 1e-14);
        let sym = ParamVector::cts(1.3f64, 0.8, 0.8, 2.0, 2.0, 0.4).unwrap();
        assert!(cumulant(&sym, 3).unwrap().abs() < 1e-15);
        let c = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.3).unwrap();
        assert_eq!(cumulant(&c, 1).unwrap(), 0.3);
        assert!(cumulant(&p, 0).is_err());
        let tsp = ParamVector::ts_prime(0.5, 1.0, 1.0).unwrap();
        assert!(matches!(cumulant(&tsp, 2), Err(Error::UnsupportedFamily { .. })));
    }

    #[test]
    fn ts_prime_is_centered_tss() {
        // TS' = TSS − Γ(1−α)δλ^{α−1} for α < 1
        let a = 0.6;
        let (d, l) = (1.4f64, 0.8f64);
        let shift = gamma(1.0 - a) * d * l.powf(a - 1.0);
        for &t in &[-2.0, 0.3, 1.7] {
            let lhs = ParamVector::ts_prime(a, d, l).unwrap().cf(t);
            let rhs = ParamVector::tss(a, d, l).unwrap().cf(t) * Complex::new(0.0, -t * shift).exp();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn mean_variance_matches_cumulants() {
        let p = ParamVector::cts(1.5, 2.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let (m, v) = mean_variance(&p);
        assert_eq!(m, 0.0);
        assert_relative_eq!(v, cumulant(&p, 2).unwrap(), max_relative = 1e-14);
        assert_relative_eq!(v, 3.0 * std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }
}
