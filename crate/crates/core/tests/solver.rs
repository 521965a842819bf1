use std::sync::OnceLock;

use proptest::prelude::*;
use upcross::experiments::{example1_objective, problem_by_id, stability_catalog, ProblemInstance, EXAMPLE1_B1};
use upcross::quantiles::{normal_quantile_bound, normal_quantile_objective, QuantileMethod};
use upcross::{
    estimate_rate, select_directed_root, us_solve, us_step_flb, BoundSpec, Domain, IterationRecord, OrientedObjective,
    SolveOptions,
};

fn catalog() -> &'static [ProblemInstance] {
    static CATALOG: OnceLock<Vec<ProblemInstance>> = OnceLock::new();
    CATALOG.get_or_init(|| stability_catalog().unwrap())
}

fn example1_bounds() -> Vec<BoundSpec> {
    let h = 0.5 * std::f64::consts::PI;
    vec![
        BoundSpec::FlbConstant { b1: EXAMPLE1_B1 },
        BoundSpec::Slub {
            b21: -h * h,
            b22: h * h,
        },
        BoundSpec::Tlb { b3: -h * h * h },
    ]
}

/// `(g(θ) − U(θ|θ_t))·sign(θ − θ_t)`, which the contract keeps nonnegative.
fn contract_gap(obj: &OrientedObjective, u: f64, theta: f64, theta_t: f64) -> f64 {
    (obj.g(theta) - u) * (theta - theta_t).signum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn u_contract_example1(theta in -3.0f64..3.0, theta_t in -3.0f64..3.0, k in 0usize..3) {
        let obj = example1_objective();
        let u = example1_bounds()[k].u_value(&obj, theta, theta_t).unwrap();
        prop_assert!(contract_gap(&obj, u, theta, theta_t) >= -1e-9 * (1.0 + obj.g(theta).abs()));
        let at = example1_bounds()[k].u_value(&obj, theta_t, theta_t).unwrap();
        prop_assert_eq!(at, obj.g(theta_t));
    }

    #[test]
    fn u_contract_normal_quantile(theta in -8.0f64..8.0, theta_t in -8.0f64..8.0, p in 0.001f64..0.999, k in 0usize..3) {
        let obj = normal_quantile_objective(p, 0.5, 1.3).unwrap();
        let method = [QuantileMethod::Flb, QuantileMethod::Slub, QuantileMethod::Tlb][k];
        let u = normal_quantile_bound(method, 1.3).u_value(&obj, theta, theta_t).unwrap();
        prop_assert!(contract_gap(&obj, u, theta, theta_t) >= -1e-9);
    }

    #[test]
    fn averaged_u_keeps_contract(theta in -3.0f64..3.0, theta_t in -3.0f64..3.0, w in 0.0f64..1.0) {
        let obj = example1_objective();
        let b = example1_bounds();
        let u1 = b[0].u_value(&obj, theta, theta_t).unwrap();
        let u3 = b[2].u_value(&obj, theta, theta_t).unwrap();
        let mean = w * u1 + (1.0 - w) * u3;
        prop_assert!(contract_gap(&obj, mean, theta, theta_t) >= -1e-9 * (1.0 + obj.g(theta).abs()));
    }

    #[test]
    fn adding_a_function_keeps_contract(theta in -3.0f64..3.0, theta_t in -3.0f64..3.0, c in -2.0f64..0.0) {
        // U₁ + g₂ for g₁ + g₂ with g₂(θ) = c·θ³.
        let obj = example1_objective();
        let g2 = |x: f64| c * x * x * x;
        let u = example1_bounds()[0].u_value(&obj, theta, theta_t).unwrap() + g2(theta);
        let gap = (obj.g(theta) + g2(theta) - u) * (theta - theta_t).signum();
        prop_assert!(gap >= -1e-9 * (1.0 + u.abs()));
    }

    #[test]
    fn flb_step_is_newton_with_constant_slope(theta_t in -5.0f64..5.0) {
        let obj = example1_objective();
        let step = us_step_flb(&obj, &BoundSpec::FlbConstant { b1: EXAMPLE1_B1 }, theta_t).unwrap();
        let newton_like = theta_t - obj.g(theta_t) / EXAMPLE1_B1;
        prop_assert!((step - newton_like).abs() <= 1e-12 * (1.0 + theta_t.abs()));
    }

    #[test]
    fn directed_root_solves_the_quadratic(c2 in -5.0f64..5.0, c1 in -5.0f64..5.0, c0 in -5.0f64..5.0, right in any::<bool>(), origin in -3.0f64..3.0) {
        let direction = if right { 1.0 } else { -1.0 };
        if let Ok(theta) = select_directed_root(c2, c1, c0, direction, origin, &Domain::real_line()) {
            let d = theta - origin;
            let scale = c0.abs().max(c1.abs()).max(c2.abs());
            prop_assert!((c2 * d * d + c1 * d + c0).abs() <= 1e-10 * scale * (1.0 + d * d));
            prop_assert!(d * direction > 0.0);
        }
    }

    #[test]
    fn geometric_rate_is_recovered(r in 0.01f64..0.99, x0 in 0.5f64..5.0) {
        let trace: Vec<IterationRecord> = (0..8)
            .map(|t| IterationRecord { t, theta: x0 * r.powi(t as i32), g_value: 0.0, eps: None, rate: None })
            .collect();
        prop_assert!((estimate_rate(&trace, 0.0, 1).unwrap() - r).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn traces_are_one_sided_and_monotone(idx in 0usize..64, u in 0.0f64..1.0) {
        let p = &catalog()[idx % catalog().len()];
        let root = p.oracle_root().unwrap();
        let x0 = p.init.0 + u * (p.init.1 - p.init.0);
        for alg in p.us_algorithms() {
            let r = p.run(alg, x0, &p.opts.with_trace()).unwrap();
            prop_assert!(r.converged(), "{} {alg}: {:?}", p.id, r.status);
            let tol = 1e-9 * (1.0 + root.abs());
            let side = (x0 - root).signum();
            for w in r.trace.windows(2) {
                prop_assert!((w[1].theta - root) * side >= -tol, "{} {alg} crossed the root", p.id);
                prop_assert!((w[1].theta - w[0].theta) * side <= 0.0, "{} {alg} stepped backwards", p.id);
            }
        }
    }

    #[test]
    fn us_agrees_with_bisection(idx in 0usize..64, u in 0.0f64..1.0) {
        let p = &catalog()[idx % catalog().len()];
        let root = p.oracle_root().unwrap();
        let x0 = p.init.0 + u * (p.init.1 - p.init.0);
        for alg in p.us_algorithms() {
            let r = p.run(alg, x0, &p.opts).unwrap();
            prop_assert!((r.root - root).abs() <= 1e-8 * root.abs().max(1.0), "{} {alg}: {} vs {root}", p.id, r.root);
        }
    }
}

#[test]
fn example1_iterates_climb_to_the_root() {
    let r = us_solve(
        &example1_objective(),
        &BoundSpec::FlbConstant { b1: EXAMPLE1_B1 },
        -1.0,
        &SolveOptions::default().with_trace(),
    )
    .unwrap();
    assert!(r.trace.windows(2).all(|w| w[1].theta > w[0].theta));
    assert!((r.root - 0.594_611_644).abs() < 1e-8);
}

#[test]
fn table_problems_resolve() {
    for id in ["example1", "table2a", "table2b", "table3-p0.01-mu-2", "table3-p0.9-mu2"] {
        assert!(problem_by_id(id).is_ok(), "{id}");
    }
}
