//! Gamma-family special functions over a generic [`Real`] scalar.
//!
//! The gamma function uses the Lanczos approximation (g = 7, nine terms) on
//! `x >= 1/2` and the reflection formula below that, so `Γ(-α)` for
//! `α ∈ (0, 2) \ {1}` is available directly.

use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(x: T) -> T {
    // x is the shifted argument (Γ(x + 1))
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::lit(i as f64));
    }
    acc
}

/// Natural log of `Γ(x)` for `x > 0`. Returns NaN for `x <= 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if !(x > T::zero()) {
        return T::nan();
    }
    if x < T::lit(0.5) {
        // ln Γ(x) = ln π − ln sin(πx) − ln Γ(1 − x)
        let pi = T::PI();
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(T::one() - x);
    }
    let xm1 = x - T::one();
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_8);
    half_ln_two_pi + (xm1 + T::lit(0.5)) * t.ln() - t + lanczos_sum(xm1).ln()
}

/// `Γ(x)` for real `x`, including negative non-integers via reflection.
///
/// Non-positive integers are poles and yield a non-finite value.
pub fn gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        let pi = T::PI();
        let s = (pi * x).sin();
        if x == x.floor() || s == T::zero() {
            return T::nan();
        }
        return pi / (s * gamma(T::one() - x));
    }
    let xm1 = x - T::one();
    let t = xm1 + T::lit(LANCZOS_G + 0.5);
    let sqrt_two_pi = T::lit(2.506_628_274_631_000_5);
    sqrt_two_pi * t.powf(xm1 + T::lit(0.5)) * (-t).exp() * lanczos_sum(xm1)
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)`.
pub fn digamma<T: Real>(x: T) -> T {
    if x <= T::zero() {
        if x == x.floor() {
            return T::nan();
        }
        let pi = T::PI();
        return digamma(T::one() - x) - pi / (pi * x).tan();
    }
    let mut acc = T::zero();
    let mut y = x;
    while y < T::lit(10.0) {
        acc = acc - y.recip();
        y = y + T::one();
    }
    let inv = y.recip();
    let inv2 = inv * inv;
    let series = inv2
        * (T::lit(1.0 / 12.0)
            - inv2
                * (T::lit(1.0 / 120.0)
                    - inv2 * (T::lit(1.0 / 252.0) - inv2 * (T::lit(1.0 / 240.0) - inv2 * T::lit(1.0 / 132.0)))));
    acc + y.ln() - T::lit(0.5) * inv - series
}
