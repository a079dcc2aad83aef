//! Raw moments from cumulants through incomplete Bell polynomials, and the
//! cumulant-matching moment functions built from them.

use tempered_core::{cumulants, Family, Params};

use crate::error::{EstimateError, Result};

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Table `B[n][k]` of incomplete Bell polynomials `B_{n,k}(x_1, …, x_{n−k+1})`
/// for `0 ≤ k ≤ n ≤ n_max`, with `x[0] = x_1`.
pub fn bell_table(n_max: usize, x: &[f64]) -> Vec<Vec<f64>> {
    assert!(x.len() >= n_max, "need x_1..x_{n_max}");
    let mut b = vec![vec![0.0; n_max + 1]; n_max + 1];
    b[0][0] = 1.0;
    for n in 1..=n_max {
        for k in 1..=n {
            let mut s = 0.0;
            for i in 1..=(n - k + 1) {
                s += binomial(n - 1, i - 1) * x[i - 1] * b[n - i][k - 1];
            }
            b[n][k] = s;
        }
    }
    b
}

/// `B_{n,k}(x_1, …, x_{n−k+1})`.
pub fn bell_incomplete(n: usize, k: usize, x: &[f64]) -> f64 {
    if k > n {
        return 0.0;
    }
    bell_table(n, x)[n][k]
}

/// Raw moments `E[X^k] = Σ_{m=1}^{k} B_{k,m}(κ₁, …, κ_{k−m+1})`, `k = 1..=p`.
pub fn raw_moments_from_cumulants(kappa: &[f64]) -> Vec<f64> {
    let p = kappa.len();
    let b = bell_table(p, kappa);
    (1..=p).map(|k| (1..=k).map(|m| b[k][m]).sum()).collect()
}

/// Checks the family and order `p` of the cumulant-matching conditions.
pub fn check_order(theta: &Params, p: usize) -> Result<()> {
    match theta.family() {
        Family::Tss | Family::Cts => {}
        family => return Err(EstimateError::Unsupported { method: "cumulant matching", family }),
    }
    if p < theta.dim() {
        return Err(EstimateError::InvalidArgument(format!("p = {p} is below the {} parameters of {}", theta.dim(), theta.family())));
    }
    Ok(())
}

/// Model raw moments of orders `1..=p`.
pub fn model_raw_moments(theta: &Params, p: usize) -> Result<Vec<f64>> {
    check_order(theta, p)?;
    let kappa = cumulants(theta, p as u32)?;
    Ok(raw_moments_from_cumulants(&kappa))
}

/// `g_k(x; θ) = x^k − E_θ[X^k]`, `k = 1..=p`.
pub fn bell_moment_conditions(x: f64, theta: &Params, p: usize) -> Result<Vec<f64>> {
    let m = model_raw_moments(theta, p)?;
    let mut pow = 1.0;
    Ok(m.iter()
        .map(|mk| {
            pow *= x;
            pow - mk
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bell_values() {
        let x = [2.0, 3.0, 5.0, 7.0];
        // B_{3,2} = 3 x1 x2, B_{4,2} = 4 x1 x3 + 3 x2², B_{4,3} = 6 x1² x2
        assert_eq!(bell_incomplete(3, 2, &x), 18.0);
        assert_eq!(bell_incomplete(4, 2, &x), 4.0 * 2.0 * 5.0 + 3.0 * 9.0);
        assert_eq!(bell_incomplete(4, 3, &x), 6.0 * 4.0 * 3.0);
        assert_eq!(bell_incomplete(4, 4, &x), 16.0);
    }

    #[test]
    fn third_moment_identity() {
        let k = [0.7, 1.3, -0.4];
        let m = raw_moments_from_cumulants(&k);
        assert!((m[0] - 0.7).abs() < 1e-15);
        assert!((m[2] - (k[2] + 3.0 * k[1] * k[0] + k[0].powi(3))).abs() < 1e-14);
    }

    #[test]
    fn normal_moments() {
        // N(0,1): E X^4 = 3, E X^6 = 15
        let m = raw_moments_from_cumulants(&[0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((m[3] - 3.0).abs() < 1e-14 && (m[5] - 15.0).abs() < 1e-13);
    }
}
