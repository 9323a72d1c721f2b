use fwkit::certify::{certify_dual_prices, certify_monotone, certify_smoothness_progress, sample_points};
use fwkit::steps::{exact_line_search_quadratic, short_step};
use fwkit::{run, Objective, Region, SolverConfig, StepRegistry, SymmetricMatrix, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn region_strategy() -> impl Strategy<Value = Region> {
    prop_oneof![
        (1usize..8).prop_map(|n| Region::simplex(n).unwrap()),
        (1usize..8, -2.0..0.0f64, 0.1..2.0f64)
            .prop_map(|(n, lo, w)| Region::unit_box(n, lo, lo + w).unwrap()),
        (1usize..8, 1usize..4, 0.1..3.0f64).prop_map(|(n, k, tau)| Region::ksparse(n, k, tau).unwrap()),
        (1usize..8, 0.1..3.0f64).prop_map(|(n, r)| Region::l1_ball(n, r).unwrap()),
        (1usize..8, 0.1..3.0f64).prop_map(|(n, r)| Region::l2_ball(n, r).unwrap()),
    ]
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vector {
    Vector::new((0..n).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect()).unwrap()
}

/// Symmetric positive semidefinite `BᵀB`.
fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> SymmetricMatrix {
    let b: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect()).collect();
    let rows = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| b[k][i] * b[k][j]).sum()).collect()).collect();
    SymmetricMatrix::from_rows(rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradients_match_central_differences(n in 1usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objectives = [
            Objective::distance_squared(random_vector(&mut rng, n, 3.0)),
            Objective::quadratic(random_psd(&mut rng, n), random_vector(&mut rng, n, 1.0)).unwrap(),
        ];
        for obj in &objectives {
            let x = random_vector(&mut rng, n, 2.0);
            let g = obj.gradient(&x).unwrap();
            let fd = obj.finite_difference_gradient(&x, 1e-6).unwrap();
            let err = (&g - &fd).norm_inf();
            prop_assert!(err <= 1e-5 * (1.0 + g.norm_inf()), "error {err}");
        }
    }

    #[test]
    fn lmo_returns_feasible_minimizers(region in region_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = region.dim();
        for _ in 0..10 {
            let c = random_vector(&mut rng, n, 5.0);
            let v = region.lmo(&c).unwrap();
            prop_assert!(region.contains(&v, 0.0), "{v} not in {region}");
            let best = c.dot(&v);
            for x in sample_points(&region, 20, rng.random()) {
                prop_assert!(best <= c.dot(&x) + 1e-12 * (1.0 + c.norm() * x.norm()));
            }
        }
    }

    #[test]
    fn ksparse_lmo_matches_brute_force(n in 1usize..=8, k in 1usize..=3, tau in 0.1..2.0f64, seed in any::<u64>()) {
        let region = Region::ksparse(n, k, tau).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_vector(&mut rng, n, 1.0);
        let mut best = 0.0f64;
        for support in 0u32..(1 << n) {
            if support.count_ones() as usize > k {
                continue;
            }
            let idx: Vec<usize> = (0..n).filter(|i| support >> i & 1 == 1).collect();
            for signs in 0u32..(1 << idx.len()) {
                let value: f64 = idx
                    .iter()
                    .enumerate()
                    .map(|(j, &i)| if signs >> j & 1 == 1 { tau * c[i] } else { -tau * c[i] })
                    .sum();
                best = best.min(value);
            }
        }
        let v = region.lmo(&c).unwrap();
        prop_assert!((c.dot(&v) - best).abs() <= 1e-12);
    }

    #[test]
    fn box_duality_identities(seed in any::<u64>(), lo in -1.0..0.5f64, w in 0.1..2.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let region = Region::unit_box(3, lo, lo + w).unwrap();
        let x = sample_points(&region, 1, seed)[0].clone();
        let obj = Objective::distance_squared(random_vector(&mut rng, 3, 3.0));
        let report = certify_dual_prices(&region, &obj, &x).unwrap();
        prop_assert!(report.passed, "{report:?}");
    }

    #[test]
    fn solver_invariants_hold_for_every_rule(region in region_strategy(), seed in any::<u64>(), rule_idx in 0usize..9) {
        let rules = ["open2", "open-ell:4", "log-shift", "constant:30", "anytime-sqrt", "short:2", "adaptive", "adaptive-simple", "linesearch"];
        let rule = rules[rule_idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = region.dim();
        let obj = Objective::distance_squared(random_vector(&mut rng, n, 2.0));
        let x0 = region.lmo(&random_vector(&mut rng, n, 1.0)).unwrap();
        let config = SolverConfig::new(StepRegistry::builtin().create(rule).unwrap())
            .max_iterations(30)
            .record_active_set(true)
            .record_iterates(true)
            .timing(false);
        let trace = run(&region, &obj, &x0, &config).unwrap();

        for (t, row) in trace.rows.iter().enumerate() {
            prop_assert_eq!(row.t, t);
            prop_assert!(row.fw_gap >= -1e-9);
            if let Some(g) = row.gamma {
                prop_assert!((0.0..=1.0).contains(&g));
            }
        }
        for x in trace.iterates.as_ref().unwrap() {
            prop_assert!(region.contains(x, 1e-9));
        }
        let set = trace.active_set.as_ref().unwrap();
        prop_assert!(set.atoms().iter().all(|a| a.weight >= 0.0));
        prop_assert!((set.total_weight() - 1.0).abs() <= 1e-9);
        prop_assert!(set.combination().distance(&trace.final_x) <= 1e-9);
        prop_assert!(set.len() <= trace.final_row().t + 1);

        let d = region.diameter();
        prop_assert!(certify_smoothness_progress(&trace, 2.0, d).unwrap().passed);
        if matches!(rule, "short:2" | "adaptive" | "adaptive-simple" | "linesearch") {
            prop_assert!(certify_monotone(&trace).passed);
        }
    }

    #[test]
    fn short_step_equals_line_search_on_distance_squared(region in region_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = region.dim();
        let obj = Objective::distance_squared(random_vector(&mut rng, n, 2.0));
        let x = sample_points(&region, 1, seed)[0].clone();
        let g = obj.gradient(&x).unwrap();
        let v = region.lmo(&g).unwrap();
        let gap = g.dot(&(&x - &v));
        let short = short_step(gap, x.distance_sq(&v), 2.0);
        let exact = exact_line_search_quadratic(&obj, &x, &v).unwrap();
        prop_assert!((short - exact).abs() <= 1e-12, "{short} vs {exact}");
    }
}
