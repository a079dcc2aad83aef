use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use tempered_core::{cgf, cumulants, Bounds, Family, ParamVector, Params};
use tempered_density::quad::{integrate_to_inf, QuadOptions};
use tempered_density::{pdf_tss, FftConfig, TssDensity};
use tempered_estimate::gmm::{gmm_conditions, gmm_covariance};
use tempered_estimate::grid::first_real_root;
use tempered_estimate::moments::raw_moments;
use tempered_estimate::*;
use tempered_sim::{sample, Cutoff};

fn tss0() -> Params {
    ParamVector::tss(0.5, 1.0, 1.0).unwrap()
}

fn draw(theta: &Params, n: usize, seed: u64) -> Vec<f64> {
    sample(theta, n, seed, 0, Cutoff::Auto).unwrap().values
}

#[test]
fn log_likelihood_of_trivial_samples() {
    let theta = tss0();
    let one = log_likelihood(&[1.3], &theta).unwrap();
    assert!((one - pdf_tss(&theta, 1.3).unwrap().ln()).abs() < 1e-12);
    let many = log_likelihood(&[1.3; 7], &theta).unwrap();
    assert!((many - 7.0 * one).abs() < 1e-10);
    // points outside the support are floored rather than -inf
    let floored = log_likelihood(&[-1.0], &theta).unwrap();
    assert!((floored - 1e-15f64.ln()).abs() < 1e-12);
}

#[test]
fn average_log_likelihood_matches_entropy() {
    let theta = tss0();
    let d = TssDensity::new(&theta).unwrap();
    let opts = QuadOptions { abs_tol: 1e-12, rel_tol: 1e-10, max_intervals: 4000 };
    let entropy = integrate_to_inf(
        |y| {
            let f = d.pdf(y).unwrap();
            if f > 0.0 { -f * f.ln() } else { 0.0 }
        },
        0.0,
        &opts,
    )
    .unwrap();
    let x = draw(&theta, 10_000, 11);
    let avg = log_likelihood(&x, &theta).unwrap() / x.len() as f64;
    assert!((avg + entropy).abs() < 0.01, "{avg} vs {}", -entropy);
}

#[test]
fn mle_from_the_truth_does_not_decrease_the_likelihood() {
    let theta = tss0();
    let x = draw(&theta, 1000, 3);
    let opts = FitOptions { start: Some(theta), ..Default::default() };
    let r = fit_mle(&x, Family::Tss, &opts).unwrap();
    assert!(r.objective >= log_likelihood(&x, &theta).unwrap());
    assert!(r.converged);
}

#[test]
fn mle_location_equivariance() {
    let c = 3.7;
    for theta in [ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap(), ParamVector::nts(0.5, 0.0, 1.0, 1.0, 0.0).unwrap()] {
        let x = draw(&theta, 2000, 5);
        let shifted: Vec<f64> = x.iter().map(|v| v + c).collect();
        let bounds = Bounds::default_for(theta.family());
        let mut start = theta.values();
        // tight tolerances so both runs stop at the optimum, not along a flat valley
        let optim = OptimOptions { f_tol: 1e-14, pg_tol: 1e-8, max_iter: 1000, ..Default::default() };
        let a = fit_mle(&x, theta.family(), &FitOptions { start: Some(theta), optim, ..Default::default() }).unwrap();
        *start.last_mut().unwrap() += c;
        let opts = FitOptions {
            start: Some(ParamVector::new(theta.family(), &start).unwrap()),
            bounds: Some(bounds.shift_location(c)),
            optim,
            ..Default::default()
        };
        let b = fit_mle(&shifted, theta.family(), &opts).unwrap();
        let (va, vb) = (a.theta_hat.values(), b.theta_hat.values());
        let last = va.len() - 1;
        for k in 0..last {
            assert!((va[k] - vb[k]).abs() < 1e-3, "{theta} component {k}: {} vs {}", va[k], vb[k]);
        }
        assert!((vb[last] - va[last] - c).abs() < 1e-3, "{theta}: location {} vs {}", va[last], vb[last]);
    }
}

#[test]
fn empirical_char_fn_examples() {
    assert_eq!(empirical_char_fn(&[0.3, -2.0, 7.0], 0.0), Complex::new(1.0, 0.0));
    for t in [0.5, 3.0, -10.0] {
        assert_eq!(empirical_char_fn(&[0.0], t), Complex::new(1.0, 0.0));
    }
    let theta = tss0();
    let x = draw(&theta, 100_000, 8);
    let gap = (empirical_char_fn(&x, 1.0) - theta.cf(1.0)).norm();
    assert!(gap < 3.0 / (x.len() as f64).sqrt(), "gap {gap}");
}

#[test]
fn moment_grid_examples() {
    let theta = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
    let x = draw(&theta, 20_000, 2);
    let g = build_moment_grid(&x, 10).unwrap();
    assert_eq!(g.t_values.len(), 10);
    assert!(!g.fallback);
    assert_eq!(g.t_values[0], 1e-6);
    let steps: Vec<f64> = g.t_values.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(steps.iter().all(|s| (s - steps[0]).abs() < 1e-12));
    // fine scan for the first sign change of Re φ̂
    let mut t = 1e-3;
    while empirical_char_fn(&x, t).re > 0.0 {
        t += 1e-3;
    }
    let root = *g.t_values.last().unwrap();
    assert!((root - t).abs() <= 1e-3, "{root} vs scan {t}");

    let doubled: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
    let r2 = first_real_root(&doubled, 100.0).unwrap();
    assert!((root / r2 - 2.0).abs() < 1e-6, "{root} / {r2}");
}

#[test]
fn gmm_objective_is_a_nonnegative_form_that_vanishes_at_an_exact_fit() {
    let theta = tss0();
    let ts: Vec<f64> = (0..10).map(|i| 1e-6 + 0.2 * i as f64).collect();
    let exact: Vec<Complex<f64>> = ts.iter().map(|&t| theta.cf(t)).collect();
    assert!(gmm_conditions(&exact, &ts, &theta).iter().all(|&g| g == 0.0));
    let x = draw(&theta, 1000, 4);
    let r = fit_gmm(&x, Family::Tss, 10, &RegularizationScheme::cutoff(0.01), &FitOptions::default()).unwrap();
    assert!(r.objective >= 0.0);
    let w = regularized_inverse(&gmm_covariance(&x, &ts), &RegularizationScheme::cutoff(0.01)).unwrap();
    assert!(w.symmetric_eigenvalues().iter().all(|&e| e >= -1e-12));
}

#[test]
fn kernel_properties() {
    let x = draw(&tss0(), 500, 9);
    for &(s, t) in &[(0.1, 0.7), (1.0, 2.5), (0.0, 0.3), (3.0, 3.0)] {
        let kst = cgmm_kernel(&x, s, t);
        let kts = cgmm_kernel(&x, t, s);
        assert!((kst - kts.conj()).norm() < 1e-14);
        let ktt = cgmm_kernel(&x, t, t);
        assert!(ktt.re >= 0.0 && ktt.im.abs() < 1e-15);
    }
    assert_eq!(cgmm_kernel(&[0.0; 20], 0.4, 1.1), Complex::new(0.0, 0.0));
}

#[test]
fn cgmm_node_count_is_converged() {
    let theta = ParamVector::cts(1.5, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
    let x = draw(&theta, 1000, 6);
    let reg = RegularizationScheme::tikhonov(0.01);
    let probe = ParamVector::cts(1.3, 1.2, 0.9, 1.1, 1.0, 0.05).unwrap();
    let a = CgmmCriterion::new(&x, &reg, 64).unwrap().value(|t| probe.cf(t));
    let b = CgmmCriterion::new(&x, &reg, 128).unwrap().value(|t| probe.cf(t));
    assert!((a - b).abs() < 1e-8, "{a} vs {b}");
}

#[test]
fn cgmm_objective_at_the_truth_shrinks_with_n() {
    let theta = tss0();
    let reg = RegularizationScheme::tikhonov(0.01);
    let median = |n: usize| {
        let mut v: Vec<f64> = (0..15)
            .map(|seed| CgmmCriterion::new(&draw(&theta, n, 100 + seed), &reg, 64).unwrap().value(|t| theta.cf(t)))
            .collect();
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let (small, large) = (median(100), median(10_000));
    assert!(large < small, "{large} vs {small}");
}

#[test]
fn bell_moment_examples() {
    let theta = tss0();
    let k = cumulants(&theta, 3).unwrap();
    let x = 1.7;
    let g = bell_moment_conditions(x, &theta, 3).unwrap();
    assert!((g[0] - (x - k[0])).abs() < 1e-14);
    let m = model_raw_moments(&theta, 3).unwrap();
    assert!((m[2] - (k[2] + 3.0 * k[1] * k[0] + k[0].powi(3))).abs() < 1e-12);
    assert!(bell_moment_conditions(x, &ParamVector::nts(0.5, 0.0, 1.0, 1.0, 0.0).unwrap(), 5).is_err());
}

/// `d^k/dt^k exp(ψ(t))` at 0 from a central difference stencil of width `h`.
fn mgf_derivative(theta: &Params, k: usize, h: f64) -> f64 {
    let m = |t: f64| cgf(theta, t).unwrap().exp();
    match k {
        1 => (m(h) - m(-h)) / (2.0 * h),
        2 => (m(h) - 2.0 * m(0.0) + m(-h)) / (h * h),
        3 => (m(2.0 * h) - 2.0 * m(h) + 2.0 * m(-h) - m(-2.0 * h)) / (2.0 * h.powi(3)),
        4 => (m(2.0 * h) - 4.0 * m(h) + 6.0 * m(0.0) - 4.0 * m(-h) + m(-2.0 * h)) / h.powi(4),
        _ => unreachable!(),
    }
}

#[test]
fn raw_moments_match_mgf_derivatives() {
    for theta in [tss0(), ParamVector::tss(0.3, 2.0, 1.5).unwrap(), ParamVector::cts(1.5, 1.0, 0.7, 1.0, 1.3, 0.2).unwrap()] {
        let p = theta.dim().max(4);
        let m = model_raw_moments(&theta, p).unwrap();
        for k in 1..=4 {
            // Richardson extrapolation of two stencil widths
            let (h1, h2) = (0.02, 0.01);
            let fd = (4.0 * mgf_derivative(&theta, k, h2) - mgf_derivative(&theta, k, h1)) / 3.0;
            assert!((fd / m[k - 1] - 1.0).abs() < 1e-4, "{theta} k={k}: {fd} vs {}", m[k - 1]);
        }
    }
}

#[test]
fn just_identified_gmc_solves_the_conditions() {
    let theta = tss0();
    for seed in 0..3 {
        let x = draw(&theta, 1000, 20 + seed);
        let r = fit_gmc(&x, Family::Tss, 3, &RegularizationScheme::tikhonov(0.01), &FitOptions::default()).unwrap();
        assert!(!r.boundary_hit);
        let model = model_raw_moments(&r.theta_hat, 3).unwrap();
        let gbar: f64 = raw_moments(&x, 3).iter().zip(&model).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(gbar <= 1e-6, "seed {seed}: {gbar}");
    }
}

#[test]
fn gmc_rejects_bad_orders() {
    let x = draw(&tss0(), 100, 1);
    let reg = RegularizationScheme::tikhonov(0.01);
    assert!(fit_gmc(&x, Family::Tss, 2, &reg, &FitOptions::default()).is_err());
    assert!(matches!(
        fit_gmc(&x, Family::Nts, 5, &reg, &FitOptions::default()),
        Err(EstimateError::Unsupported { .. })
    ));
}

#[test]
fn estimates_stay_in_bounds_and_flag_boundaries() {
    let theta = tss0();
    let x = draw(&theta, 100, 12);
    let bounds = Bounds::standard(Family::Tss, 1e-6, 1.1).unwrap();
    let opts = FitOptions { bounds: Some(bounds.clone()), ..Default::default() };
    for method in [Method::Mle, Method::Gmm { r: None }, Method::Cgmm { gamma: None, nodes: None }, Method::Gmc { p: 4, gamma: None }] {
        let r = fit(&x, Family::Tss, method, &opts).unwrap();
        let v = r.theta_hat.values();
        assert!(bounds.contains(&v), "{method}: {v:?}");
        let near = v.iter().zip(bounds.lower.iter().zip(&bounds.upper)).any(|(x, (lo, hi))| (x - lo).abs() <= 1e-6 || (hi - x).abs() <= 1e-6);
        assert_eq!(r.boundary_hit, near, "{method}: {v:?}");
    }
}

#[test]
fn median_error_falls_with_sample_size() {
    let theta = tss0();
    let truth = theta.values();
    let methods = [Method::Mle, Method::Gmm { r: None }, Method::Cgmm { gamma: None, nodes: None }, Method::Gmc { p: 4, gamma: None }];
    let median_error = |method: Method, n: usize| {
        let mut e: Vec<f64> = (0..100)
            .filter_map(|rep| {
                let x = sample(&theta, n, 77, rep, Cutoff::Auto).unwrap().values;
                let r = fit(&x, Family::Tss, method, &FitOptions::default()).ok()?;
                Some(r.theta_hat.values().iter().zip(&truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            })
            .collect();
        e.sort_by(f64::total_cmp);
        e[e.len() / 2]
    };
    for method in methods {
        let (small, large) = (median_error(method, 100), median_error(method, 1000));
        assert!(large < small, "{method}: {large} vs {small}");
    }
}

#[test]
fn gmc_conditions_identify_tss() {
    // Jacobian of (m₁, m₂, m₃) with respect to (α, δ, λ) by central differences
    let v = tss0().values();
    let mut jac = DMatrix::zeros(3, 3);
    for j in 0..3 {
        let h = 1e-5;
        let (mut up, mut down) = (v.clone(), v.clone());
        up[j] += h;
        down[j] -= h;
        let mu = model_raw_moments(&ParamVector::new(Family::Tss, &up).unwrap(), 3).unwrap();
        let md = model_raw_moments(&ParamVector::new(Family::Tss, &down).unwrap(), 3).unwrap();
        for i in 0..3 {
            jac[(i, j)] = (mu[i] - md[i]) / (2.0 * h);
        }
    }
    let det = jac.determinant();
    assert!(det.abs() > 1e-6, "{det}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn regularized_inverse_approaches_the_inverse(entries in proptest::collection::vec(-1.0f64..1.0, 16)) {
        let b = DMatrix::from_vec(4, 4, entries);
        let a = &b * b.transpose() + DMatrix::identity(4, 4);
        let direct = a.clone().try_inverse().unwrap();
        for scheme in [RegularizationScheme::tikhonov(1e-10), RegularizationScheme::cutoff(1e-10)] {
            let r = regularized_inverse(&a, &scheme).unwrap();
            prop_assert!((r - &direct).amax() <= 1e-6);
        }
    }

    #[test]
    fn cgmm_objective_is_nonnegative(a in 0.1f64..0.95, d in 0.2f64..3.0, l in 0.2f64..3.0) {
        let x = draw(&tss0(), 200, 31);
        let crit = CgmmCriterion::new(&x, &RegularizationScheme::tikhonov(0.01), 64).unwrap();
        let theta = ParamVector::tss(a, d, l).unwrap();
        prop_assert!(crit.value(|t| theta.cf(t)) >= -1e-10);
    }
}

#[test]
fn fft_config_is_used_by_the_likelihood_cache() {
    let theta = ParamVector::nts(0.5, 0.0, 1.0, 1.0, 0.0).unwrap();
    let x = draw(&theta, 50, 2);
    let lik = Likelihood::new(&x, FftConfig::default());
    let a = lik.eval(&theta).unwrap();
    let b = lik.eval(&theta).unwrap();
    assert_eq!(a, b);
    assert!((a - log_likelihood(&x, &theta).unwrap()).abs() < 1e-12);
}

#[test]
fn results_round_trip_through_json() {
    let x = draw(&tss0(), 200, 3);
    let r = fit(&x, Family::Tss, Method::Gmc { p: 4, gamma: None }, &FitOptions::default()).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: EstimationResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let m: Method = serde_json::from_str(r#"{"method":"cgmm","gamma":0.1}"#).unwrap();
    assert_eq!(m, Method::Cgmm { gamma: Some(0.1), nodes: None });
}
