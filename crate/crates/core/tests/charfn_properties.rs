use proptest::prelude::*;
use tempered_core::{cgf, char_fn, cumulant, Family, Params, ParamVector};

fn any_tss() -> impl Strategy<Value = Params> {
    (0.05f64..0.95, 0.1f64..5.0, 0.1f64..5.0).prop_map(|(a, d, l)| ParamVector::tss(a, d, l).unwrap())
}

fn any_ts_prime() -> impl Strategy<Value = Params> {
    (0.05f64..1.95, 0.1f64..5.0, 0.1f64..5.0).prop_map(|(a, d, l)| ParamVector::ts_prime(a, d, l).unwrap())
}

fn any_cts() -> impl Strategy<Value = Params> {
    (0.05f64..1.95, 0.1f64..3.0, 0.1f64..3.0, 0.2f64..4.0, 0.2f64..4.0, -2.0f64..2.0)
        .prop_map(|(a, dp, dm, lp, lm, mu)| ParamVector::cts(a, dp, dm, lp, lm, mu).unwrap())
}

fn any_nts() -> impl Strategy<Value = Params> {
    (0.05f64..0.95, -2.0f64..2.0, 0.1f64..3.0, 0.2f64..4.0, -2.0f64..2.0)
        .prop_map(|(a, b, d, l, mu)| ParamVector::nts(a, b, d, l, mu).unwrap())
}

fn any_params() -> impl Strategy<Value = Params> {
    prop_oneof![any_tss(), any_ts_prime(), any_cts(), any_nts()]
}

// central finite difference of order m at 0 with step h
fn fd_derivative(f: impl Fn(f64) -> f64, m: u32, h: f64) -> f64 {
    let coeffs: &[(f64, f64)] = match m {
        1 => &[(-1.0, -0.5), (1.0, 0.5)],
        2 => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        3 => &[(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)],
        4 => &[(-2.0, 1.0), (-1.0, -4.0), (0.0, 6.0), (1.0, -4.0), (2.0, 1.0)],
        _ => unreachable!(),
    };
    let d = |h: f64| coeffs.iter().map(|&(k, c)| c * f(k * h)).sum::<f64>() / h.powi(m as i32);
    // one Richardson step removes the O(h²) error term
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

proptest! {
    #[test]
    fn cf_basic_properties(p in any_params(), t in -50.0f64..50.0) {
        let c = char_fn(&p, t).unwrap();
        prop_assert!(c.norm() <= 1.0 + 1e-12, "|φ| = {}", c.norm());
        let cm = char_fn(&p, -t).unwrap();
        prop_assert!((cm - c.conj()).norm() <= 1e-12 * (1.0 + c.norm()));
        let c0 = char_fn(&p, 0.0).unwrap();
        prop_assert!((c0.re - 1.0).abs() < 1e-15 && c0.im.abs() < 1e-15);
    }

    #[test]
    fn cgf_vanishes_at_zero(p in prop_oneof![any_tss(), any_cts()]) {
        prop_assert!(cgf(&p, 0.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn finite_difference_cumulants_tss(p in any_tss()) {
        let l = match p { ParamVector::Tss(q) => q.lambda, _ => unreachable!() };
        for m in 1..=4u32 {
            let h = [0.0, 1e-3, 1e-2, 2e-2, 5e-2][m as usize] * l;
            let fd = fd_derivative(|t| cgf(&p, t).unwrap(), m, h);
            let exact = cumulant(&p, m).unwrap();
            prop_assert!(((fd - exact) / exact).abs() < 1e-4, "m={} fd={} exact={}", m, fd, exact);
        }
    }

    #[test]
    fn finite_difference_cumulants_cts(p in any_cts()) {
        let (lp, lm) = match p { ParamVector::Cts(q) => (q.lambda_plus, q.lambda_minus), _ => unreachable!() };
        let scale = lp.min(lm);
        for m in 1..=4u32 {
            let h = [0.0, 1e-3, 1e-2, 2e-2, 5e-2][m as usize] * scale;
            let fd = fd_derivative(|t| cgf(&p, t).unwrap(), m, h);
            let exact = cumulant(&p, m).unwrap();
            let tol = 1e-4 * exact.abs().max(cumulant(&p, 2).unwrap().powf(m as f64 / 2.0));
            prop_assert!((fd - exact).abs() < tol, "m={} fd={} exact={}", m, fd, exact);
        }
    }

    #[test]
    fn imaginary_continuation_matches_cgf_derivatives(p in prop_oneof![any_tss(), any_cts()]) {
        // i^m κ_m from derivatives of log φ at 0 equal the cgf cumulants
        for m in 1..=2u32 {
            let h = 1e-3;
            let re = fd_derivative(|t| p.log_cf(t).re, m, h);
            let im = fd_derivative(|t| p.log_cf(t).im, m, h);
            let kappa = cumulant(&p, m).unwrap();
            let (expect_re, expect_im) = if m == 1 { (0.0, kappa) } else { (-kappa, 0.0) };
            let tol = 1e-4 * (1.0 + kappa.abs());
            prop_assert!((re - expect_re).abs() < tol && (im - expect_im).abs() < tol);
        }
    }

    #[test]
    fn cts_alpha_one_continuity(
        dp in 0.1f64..3.0, dm in 0.1f64..3.0, lp in 0.2f64..4.0, lm in 0.2f64..4.0, mu in -1.0f64..1.0,
        t in -10.0f64..10.0,
    ) {
        let at = |a: f64| ParamVector::cts(a, dp, dm, lp, lm, mu).unwrap().cf(t);
        let c1 = at(1.0);
        prop_assert!((at(1.0 + 1e-6) - c1).norm() <= 1e-4);
        prop_assert!((at(1.0 - 1e-6) - c1).norm() <= 1e-4);
    }

    #[test]
    fn f32_tracks_f64(p in any_params(), t in -5.0f64..5.0) {
        let lo: ParamVector<f32> = p.cast();
        let c32 = lo.cf(t as f32);
        let c64 = p.cf(t);
        prop_assert!(((c32.re as f64 - c64.re).powi(2) + (c32.im as f64 - c64.im).powi(2)).sqrt() < 1e-3);
    }
}

#[test]
fn every_family_round_trips_through_values() {
    for fam in Family::ALL {
        let vals: Vec<f64> = match fam {
            Family::Tss => vec![0.5, 1.0, 1.0],
            Family::TsPrime => vec![1.5, 1.0, 1.0],
            Family::Cts => vec![1.5, 1.0, 1.0, 1.0, 1.0, 0.0],
            Family::Nts => vec![0.5, 0.0, 1.0, 1.0, 0.0],
        };
        let p = ParamVector::new(fam, &vals).unwrap();
        assert_eq!(p.values(), vals);
        assert_eq!(p.dim(), fam.dim());
    }
}
