use proptest::prelude::*;
use upcross::pvalues::{chisq_equal_density_pvalue, f_equal_density_pvalue, Side};
use upcross::quantiles::{
    beta_quantile_small_params, mode_options, normal_quantile, skew_normal_mode, skew_normal_quantile, QuantileMethod,
};
use upcross::special::{normal_cdf, reg_incomplete_beta, skew_normal_cdf, skew_normal_log_pdf_deriv, skew_normal_pdf};
use upcross::{bisection_solve, SolveOptions};

fn tight() -> SolveOptions {
    SolveOptions::default().with_tol_g(1e-12).with_max_iter(5000)
}

// Reference values below are 40-digit mpmath solutions (findroot on the cdf,
// or on the log-density for equal-density points).

#[test]
fn skew_normal_quantiles_match_reference() {
    let cases = [
        ((0.5, 0.0, 1.0, 1.0), 0.544_952_135_617_360_3),
        ((0.95, 1.0, 2.0, 3.0), 4.919_927_968_880_333),
        ((0.01, 0.0, 1.0, 5.0), -0.224_004_569_221_783_05),
        ((0.3, -1.0, 0.5, 2.0), -0.843_435_276_822_444_6),
    ];
    for ((p, mu, s, a), want) in cases {
        let r = skew_normal_quantile(p, mu, s, a, None, &tight()).unwrap();
        assert!(r.converged(), "{p} {mu} {s} {a}: {:?}", r.status);
        assert!((r.root - want).abs() < 1e-7, "{p} {mu} {s} {a}: {} vs {want}", r.root);
    }
}

#[test]
fn skew_normal_quantile_matches_bisection_oracle() {
    let (p, mu, s, a) = (0.95, 1.0, 2.0, 3.0);
    let oracle = bisection_solve(
        |x| p - skew_normal_cdf(x, mu, s, a).unwrap(),
        -20.0,
        20.0,
        &SolveOptions::default(),
    )
    .unwrap();
    let r = skew_normal_quantile(p, mu, s, a, None, &tight()).unwrap();
    assert!((r.root - oracle.root).abs() < 1e-7);
}

#[test]
fn skew_normal_zero_alpha_is_normal() {
    for p in [0.05, 0.5, 0.8] {
        let sn = skew_normal_quantile(p, 1.0, 2.0, 0.0, None, &tight()).unwrap();
        let n = normal_quantile(p, 1.0, 2.0, None, QuantileMethod::Flb, &tight()).unwrap();
        assert!((sn.root - n.root).abs() < 1e-8);
    }
}

#[test]
fn skew_normal_modes_match_reference() {
    let cases = [
        (0.5, 0.345_613_015_593_110_6),
        (1.0, 0.506_054_468_989_180_8),
        (3.0, 0.473_395_629_366_813_6),
        (5.0, 0.370_501_828_553_647_07),
    ];
    for (alpha, want) in cases {
        let m = skew_normal_mode(0.0, 1.0, alpha, 0.0, &mode_options()).unwrap();
        assert!((m - want).abs() < 1e-8, "alpha {alpha}: {m} vs {want}");
    }
}

#[test]
fn skew_normal_mode_beats_dense_grid() {
    for alpha in [1.0, 5.0] {
        let m = skew_normal_mode(0.0, 1.0, alpha, 0.0, &mode_options()).unwrap();
        let (mut best, mut best_f) = (0.0, f64::MIN);
        for i in 0..1_000_000 {
            let x = -1.0 + 3.0 * i as f64 / 1e6;
            let f = skew_normal_pdf(x, 0.0, 1.0, alpha).unwrap();
            if f > best_f {
                best = x;
                best_f = f;
            }
        }
        assert!((m - best).abs() < 1e-5, "alpha {alpha}: {m} vs grid {best}");
    }
}

#[test]
fn beta_quantiles_match_reference() {
    let cases = [
        ((0.9, 0.3, 0.7), 0.854_078_075_182_677_5),
        ((0.5, 0.3, 0.7), 0.158_774_686_978_501_63),
        ((0.75, 0.6, 0.8), 0.712_414_709_622_988_6),
        ((0.1, 0.9, 0.5), 0.153_243_147_946_869_93),
    ];
    for ((p, a, b), want) in cases {
        let r = beta_quantile_small_params(p, a, b, None, &tight()).unwrap();
        assert!(r.converged(), "{p} {a} {b}: {:?}", r.status);
        assert!((r.root - want).abs() < 1e-8, "{p} {a} {b}: {} vs {want}", r.root);
    }
}

#[test]
fn beta_bisection_oracle() {
    let (p, a, b) = (0.9, 0.3, 0.7);
    let oracle = bisection_solve(
        |x| p - reg_incomplete_beta(x, a, b).unwrap(),
        1e-12,
        1.0 - 1e-12,
        &SolveOptions::default(),
    )
    .unwrap();
    let r = beta_quantile_small_params(p, a, b, Some(0.2), &tight()).unwrap();
    assert!((r.root - oracle.root).abs() < 1e-8);
}

// The surrogate slope a/x² + a/(1−x)² grows much faster than the density
// toward either end, so deep-tail quantiles contract at a rate close to 1.
#[test]
fn beta_tail_quantiles_are_slow() {
    let opts = SolveOptions::default()
        .with_tol_g(1e-9)
        .with_tol_x(f64::MIN_POSITIVE)
        .with_max_iter(1000);
    let r = beta_quantile_small_params(0.01, 0.5, 0.5, None, &opts).unwrap();
    assert_eq!(r.status, upcross::SolveStatus::MaxIterations);
    let exact = (std::f64::consts::PI * 0.005).sin().powi(2);
    assert!(r.root > exact);
}

#[test]
fn beta_bound_inequality_holds_with_equality_only_at_half() {
    for i in 1..1000 {
        let x = i as f64 / 1000.0;
        let lhs = 1.0 / (x * (1.0 - x));
        let rhs = 1.0 / (2.0 * x * x) + 1.0 / (2.0 * (1.0 - x) * (1.0 - x));
        assert!(lhs <= rhs * (1.0 + 1e-15));
        if i != 500 {
            assert!(lhs < rhs);
        }
    }
    assert_eq!(1.0 / (0.5 * 0.5), 1.0 / (2.0 * 0.25) + 1.0 / (2.0 * 0.25));
}

#[test]
fn chisq_pvalues_match_reference() {
    let cases = [
        ((1.0, 4), 3.512_862_417_252_339_4, 0.566_129_293_245_912_7),
        ((15.0, 10), 3.613_901_183_095_056_6, 0.168_973_192_727_651_47),
        ((0.5, 3), 1.756_431_208_626_169_7, 0.705_570_156_082_621_8),
        ((30.0, 20), 9.727_297_992_569_652, 0.097_002_168_325_193_87),
    ];
    for ((obs, nu), point, p) in cases {
        let r = chisq_equal_density_pvalue(obs, nu, &SolveOptions::default()).unwrap();
        assert!(
            (r.matched_point - point).abs() < 1e-7,
            "{obs} {nu}: {}",
            r.matched_point
        );
        assert!((r.p_value - p).abs() < 1e-9, "{obs} {nu}: {}", r.p_value);
    }
}

#[test]
fn f_pvalues_match_reference() {
    let cases = [
        ((0.2, 5, 10), 1.085_781_470_609_472_3, 0.469_226_789_545_973_8),
        ((3.0, 8, 6), 0.091_902_074_804_180_65, 0.100_654_766_652_285_76),
        ((0.05, 3, 1), 0.224_953_119_529_814_9, 0.895_277_842_147_702_9),
        ((5.0, 4, 30), 0.000_847_961_134_656_527_7, 0.003_292_826_875_902_876),
    ];
    for ((obs, nu1, nu2), point, p) in cases {
        let r = f_equal_density_pvalue(obs, nu1, nu2, &SolveOptions::default()).unwrap();
        assert!(
            (r.matched_point - point).abs() < 1e-7 * point.max(1.0),
            "{obs}: {}",
            r.matched_point
        );
        assert!((r.p_value - p).abs() < 1e-9, "{obs}: {}", r.p_value);
    }
}

#[test]
fn chisq_matches_dense_grid_oracle() {
    // h(x) = h(1) for ν = 4 on (2, 60), found on a 10⁷-point grid.
    let l = |x: f64| 2.0 * x.ln() - x;
    let target = l(1.0);
    let n = 10_000_000;
    let mut point = f64::NAN;
    let mut prev = l(2.0) - target;
    for i in 1..=n {
        let x = 2.0 + 58.0 * i as f64 / n as f64;
        let v = l(x) - target;
        if v.signum() != prev.signum() {
            point = x;
            break;
        }
        prev = v;
    }
    let r = chisq_equal_density_pvalue(1.0, 4, &SolveOptions::default()).unwrap();
    assert!((r.matched_point - point).abs() < 1e-5);
}

fn chisq_log_density(x: f64, nu: u32) -> f64 {
    (f64::from(nu) / 2.0 - 1.0) * x.ln() - x / 2.0
}

fn f_log_density(x: f64, nu1: u32, nu2: u32) -> f64 {
    let (n1, n2) = (f64::from(nu1), f64::from(nu2));
    (n1 / 2.0 - 1.0) * x.ln() - (n1 + n2) / 2.0 * (n1 / n2 * x).ln_1p()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_round_trip(p in 0.001f64..0.999, mu in -5.0f64..5.0, sigma in 0.1f64..5.0, method in 0usize..3) {
        let method = [QuantileMethod::Flb, QuantileMethod::Slub, QuantileMethod::Tlb][method];
        let r = normal_quantile(p, mu, sigma, None, method, &tight()).unwrap();
        prop_assert!(r.converged());
        prop_assert!((normal_cdf(r.root, mu, sigma).unwrap() - p).abs() < 1e-7);
    }

    #[test]
    fn skew_normal_round_trip(idx in 0usize..7, alpha in 0.0f64..6.0, mu in -2.0f64..2.0, sigma in 0.2f64..3.0) {
        let p = [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99][idx];
        let r = skew_normal_quantile(p, mu, sigma, alpha, None, &tight()).unwrap();
        prop_assert!(r.converged());
        prop_assert!((skew_normal_cdf(r.root, mu, sigma, alpha).unwrap() - p).abs() < 1e-7);
    }

    #[test]
    fn beta_round_trip(idx in 0usize..5, a in 0.5f64..0.95, b in 0.5f64..0.95) {
        let p = [0.1, 0.25, 0.5, 0.75, 0.9][idx];
        let r = beta_quantile_small_params(p, a, b, None, &tight()).unwrap();
        prop_assert!(r.converged(), "{:?}", r.status);
        prop_assert!((reg_incomplete_beta(r.root, a, b).unwrap() - p).abs() < 1e-7);
    }

    #[test]
    fn quantiles_are_monotone_in_p(p1 in 0.01f64..0.99, gap in 0.001f64..0.5, alpha in 0.0f64..4.0) {
        let p2 = (p1 + gap).min(0.995);
        prop_assume!(p2 > p1);
        let q = |p: f64| skew_normal_quantile(p, 0.0, 1.0, alpha, None, &tight()).unwrap().root;
        prop_assert!(q(p1) < q(p2));
        prop_assume!(p1 > 0.2 && p2 < 0.8);
        let b = |p: f64| beta_quantile_small_params(p, 0.4, 0.6, None, &tight()).unwrap().root;
        prop_assert!(b(p1) < b(p2));
    }

    #[test]
    fn skew_normal_mode_is_stationary(alpha in 0.0f64..8.0, mu in -3.0f64..3.0, sigma in 0.1f64..4.0, s0 in -5.0f64..5.0) {
        let m = skew_normal_mode(mu, sigma, alpha, mu + s0 * sigma, &mode_options()).unwrap();
        prop_assert!(skew_normal_log_pdf_deriv(m, mu, sigma, alpha).unwrap().abs() < 1e-6);
    }

    #[test]
    fn chisq_density_match_and_sides(obs in 0.05f64..60.0, nu in 3u32..40) {
        let r = chisq_equal_density_pvalue(obs, nu, &SolveOptions::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.p_value));
        let m0 = f64::from(nu) - 2.0;
        match r.side {
            Side::ObsBelowMode => prop_assert!(r.matched_point > m0),
            Side::ObsAboveMode => prop_assert!(r.matched_point > 0.0 && r.matched_point < m0),
            Side::ObsAtMode => prop_assert_eq!(r.p_value, 1.0),
        }
        let ratio = (chisq_log_density(r.matched_point, nu) - chisq_log_density(obs, nu)).exp();
        prop_assert!((ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn f_density_match_and_sides(obs in 0.01f64..20.0, nu1 in 3u32..30, nu2 in 1u32..30) {
        let r = f_equal_density_pvalue(obs, nu1, nu2, &SolveOptions::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.p_value));
        let ratio = (f_log_density(r.matched_point, nu1, nu2) - f_log_density(obs, nu1, nu2)).exp();
        prop_assert!((ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pvalue_falls_away_from_mode(nu in 3u32..30, d1 in 0.05f64..0.9, extra in 0.01f64..0.5) {
        let m0 = f64::from(nu) - 2.0;
        let d2 = (d1 + extra).min(0.99);
        prop_assume!(d2 > d1);
        let p = |obs: f64| chisq_equal_density_pvalue(obs, nu, &SolveOptions::default()).unwrap().p_value;
        prop_assert!(p(m0 * (1.0 - d2)) < p(m0 * (1.0 - d1)));
        prop_assert!(p(m0 * (1.0 + 4.0 * d2)) < p(m0 * (1.0 + 4.0 * d1)));
    }
}
