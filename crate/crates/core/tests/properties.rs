mod common;

use common::{Literal, FOUR_CAV_MIX};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weave_core::*;

fn flows() -> impl Strategy<Value = FlowConfig> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        FlowConfig::new(lo, hi - lo, 1.0 - hi).unwrap()
    })
}

fn coeffs() -> impl Strategy<Value = CostCoefficients> {
    prop::array::uniform10(0.1..5.0f64).prop_map(CostCoefficients::from_array)
}

fn config() -> impl Strategy<Value = RampConfig> {
    (flows(), coeffs()).prop_map(|(n, c)| RampConfig::new(n, c).unwrap())
}

fn admissible_config() -> impl Strategy<Value = RampConfig> {
    any::<u64>().prop_map(|seed| common::random_admissible(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lane1_costs_are_monotone(cfg in config(), x in 0.001..0.999f64) {
        let l = Literal::new(&cfg);
        let h = 1e-6;
        prop_assert!(l.j1s(x + h) > l.j1s(x - h));
        prop_assert!(l.j1b(x + h) < l.j1b(x - h));
        let k = cfg.affine();
        prop_assert!(k.k1s > 0.0 && k.k1b > 0.0);
    }

    #[test]
    fn affine_reduction_reproduces_literal_costs(cfg in config(), x in 0.0..=1.0f64) {
        let l = Literal::new(&cfg);
        let c = eval_costs(&cfg.affine(), x).unwrap();
        for (a, b) in [
            (c.j1s, l.j1s(x)),
            (c.j1b, l.j1b(x)),
            (c.j2s, l.j2s(x)),
            (c.j2exit, l.j2exit(x)),
            (c.j0enter, l.j0enter(x)),
        ] {
            prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn affine_reduction_is_deterministic(cfg in config()) {
        let again = RampConfig::new(
            FlowConfig::new(cfg.flows().n0_enter(), cfg.flows().n2_exit(), cfg.flows().n2_s()).unwrap(),
            *cfg.coeffs(),
        )
        .unwrap();
        prop_assert_eq!(affine_reduce(&cfg), affine_reduce(&again));
    }

    #[test]
    fn quadratic_matches_social_cost(cfg in config(), x in 0.0..=1.0f64) {
        let q = social_quadratic(&cfg);
        prop_assert!(q.a > 0.0);
        let direct = social_cost(&cfg, x).unwrap();
        prop_assert!((direct - q.eval(x)).abs() < 1e-10);
        prop_assert!((direct - Literal::new(&cfg).j_soc(x)).abs() < 1e-10);
    }

    #[test]
    fn hdv_equilibrium_matches_bisection(cfg in config()) {
        let eq = solve_hdv(&cfg).unwrap();
        prop_assert!((eq.x1s_star - common::hdv_bisection(&cfg)).abs() < 1e-8);
        let root = phi(&cfg).unwrap();
        let expected = if root <= 0.0 {
            EquilibriumCase::AllBypass
        } else if root >= 1.0 {
            EquilibriumCase::AllSteadfast
        } else {
            EquilibriumCase::Interior
        };
        prop_assert_eq!(eq.case, expected);
        prop_assert!(equilibrium_residual(&cfg, eq.x1s_star).unwrap() < 1e-10);
    }

    #[test]
    fn hdv_equilibrium_is_unique(cfg in config()) {
        let star = solve_hdv(&cfg).unwrap().x1s_star;
        prop_assert!(check_wardrop(&cfg, &FlowDistribution::hdv_only(star).unwrap(), 1e-6));
        let passing: Vec<usize> = (0..=10_000)
            .filter(|&i| {
                let x = i as f64 / 10_000.0;
                check_wardrop(&cfg, &FlowDistribution::hdv_only(x).unwrap(), 1e-6)
            })
            .collect();
        if let (Some(&first), Some(&last)) = (passing.first(), passing.last()) {
            prop_assert_eq!(last - first + 1, passing.len());
            // A point x away from the root passes only while
            // x (k1s + k1b) |x - star| stays under the tolerance.
            let k = cfg.affine();
            let slope = k.k1s + k.k1b;
            for i in [first, last] {
                let x = i as f64 * 1e-4;
                let m = x.min(1.0 - x);
                if m > 0.0 {
                    prop_assert!((x - star).abs() < 2e-4 + 1e-6 / (slope * m));
                }
            }
        }
    }

    #[test]
    fn gap_is_nonnegative(cfg in config()) {
        prop_assert!(ue_so_gap(&cfg).unwrap().gap >= -1e-10);
    }

    #[test]
    fn gap_scales_with_unit_costs(cfg in config(), lambda in 0.1..10.0f64) {
        let scaled = cfg.with_coeffs(cfg.coeffs().with_unit_costs_scaled(lambda)).unwrap();
        let (g1, g2) = (ue_so_gap(&cfg).unwrap().gap, ue_so_gap(&scaled).unwrap().gap);
        prop_assert!((g2 - lambda * g1).abs() < 1e-9 * (1.0 + g2.abs()));
        prop_assert!((phi(&scaled).unwrap() - phi(&cfg).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn admissible_implies_interior(cfg in admissible_config()) {
        prop_assert_eq!(solve_hdv(&cfg).unwrap().case, EquilibriumCase::Interior);
        prop_assert!(solve_social_optimum(&cfg).unwrap().interior);
    }

    #[test]
    fn closed_solutions_satisfy_follower(cfg in admissible_config(), p in 0.0..=1.0f64) {
        let s = solve_closed(&cfg, p).unwrap();
        prop_assert!(check_wardrop(&cfg, &s.distribution().unwrap(), 1e-9));
        let n = solve_numeric(&cfg, p, 1e-10).unwrap();
        prop_assert!((n.j_soc - s.j_soc).abs() < 1e-7);
    }

    #[test]
    fn leader_is_rational(cfg in admissible_config(), p in 0.0..=1.0f64) {
        let s = solve_closed(&cfg, p).unwrap();
        prop_assert!(common::leader_grid_min(&cfg, p, 2_000) >= s.j_soc - 1e-9);
    }

    #[test]
    fn endpoint_thresholds(cfg in config()) {
        let selfish = chi(&cfg, Orientation::from_angle(0.0)).unwrap();
        let prosocial = chi(&cfg, Orientation::from_angle(std::f64::consts::FRAC_PI_2)).unwrap();
        prop_assert!((selfish - phi(&cfg).unwrap()).abs() < 1e-12);
        prop_assert!((prosocial - gamma(&cfg).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn prosocial_gap_is_marginal_social_cost(cfg in config(), x in 0.01..0.99f64) {
        let t = svo_transform(&cfg, Orientation::from_weights(0.0, 1.0)).unwrap();
        let fd = Literal::new(&cfg).marginal(x, 1e-6);
        prop_assert!((t.gap(x) - fd).abs() < 1e-5);
        prop_assert!((social_quadratic(&cfg).slope(x) - fd).abs() < 1e-5);
    }

    #[test]
    fn heterogeneous_structure(cfg in admissible_config(), p in 0.0..=1.0f64) {
        let pop = common::population(&FOUR_CAV_MIX);
        let Ok(e) = solve_heterogeneous(&cfg, &pop, p) else {
            // Thresholds closer than the distinctness gap.
            return Ok(());
        };
        let chis = thresholds(&cfg, &pop).unwrap();
        let strictly_inside = e
            .allocations
            .iter()
            .zip(&e.shares)
            .filter(|(a, w)| **a > 0.0 && **a < **w)
            .count();
        prop_assert!(strictly_inside <= 1);
        for ((a, w), c) in e.allocations.iter().zip(&e.shares).zip(&chis) {
            if *w > 0.0 && *a == *w {
                prop_assert!(*c >= e.x1s_star - 1e-9);
            }
            if *w > 0.0 && *a == 0.0 {
                prop_assert!(*c <= e.x1s_star + 1e-9);
            }
        }
        prop_assert!(check_heterogeneous(&cfg, &pop, p, &e.allocations, 1e-9));
    }

    #[test]
    fn heterogeneous_matches_grid_scan(cfg in config(), w in 0.05..0.95f64, spread in 0.1..1.2f64) {
        // HDV-only population at p = 0 with two orientations.
        let pop = Population::new(vec![
            VehicleType::new(VehicleClass::Hdv, Orientation::from_angle(0.0), w).unwrap(),
            VehicleType::new(VehicleClass::Hdv, Orientation::from_angle(spread), 1.0 - w).unwrap(),
        ])
        .unwrap();
        let e = solve_heterogeneous(&cfg, &pop, 0.0).unwrap();
        let scan = common::hetero_scan(&cfg, &[(0.0, w), (spread, 1.0 - w)], 1e-5);
        prop_assert!((e.x1s_star - scan).abs() <= 1.5e-5, "{} vs {}", e.x1s_star, scan);
    }

    #[test]
    fn plateau_intervals_match_membership(cfg in admissible_config(), seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_hdv = rng.gen_range(1..=2);
        let n_cav = rng.gen_range(1..=3);
        let mut spec = Vec::new();
        for (cav, n) in [(false, n_hdv), (true, n_cav)] {
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            for r in raw {
                spec.push((cav, rng.gen_range(0.0..std::f64::consts::FRAC_PI_2), r / sum));
            }
        }
        let pop = common::population(&spec);
        let Ok(intervals) = plateau_intervals(&cfg, &pop) else {
            return Ok(());
        };
        for pair in intervals.windows(2) {
            prop_assert!(pair[0].p_hi <= pair[1].p_lo);
        }
        for i in 0..=1000 {
            let p = i as f64 / 1000.0;
            let e = solve_heterogeneous(&cfg, &pop, p).unwrap();
            let analytic = intervals.iter().find(|iv| iv.contains(p)).map(|iv| iv.k);
            if analytic != e.active_type {
                // Only allowed within one grid step of an interval end.
                let near_end = intervals
                    .iter()
                    .any(|iv| (p - iv.p_lo).abs() <= 1e-3 || (p - iv.p_hi).abs() <= 1e-3);
                prop_assert!(near_end, "p = {p}: analytic {analytic:?}, solver {:?}", e.active_type);
            }
            if let Some(k) = analytic {
                let iv = intervals.iter().find(|iv| iv.k == k).unwrap();
                if e.active_type == Some(k) {
                    prop_assert!((e.x1s_star - iv.chi).abs() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn population_shares_sum_to_one() {
    let pop = common::population(&FOUR_CAV_MIX);
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        let total: f64 = population_shares(&pop, p).iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn scale_invariance_of_phi() {
    let t = 1.0 / 3.0;
    let cfg = RampConfig::calibrated(FlowConfig::new(t, t, t).unwrap());
    let base = phi(&cfg).unwrap();
    for lambda in [0.5, 2.0, 10.0] {
        let scaled = cfg.with_coeffs(cfg.coeffs().with_unit_costs_scaled(lambda)).unwrap();
        assert!((phi(&scaled).unwrap() - base).abs() < 1e-12);
    }
}
