mod support;

use funex_core::behavior::{business_cycle, fixed_point, weight, Feeling};
use funex_core::bid::{
    architect_budget, assess, birkhoff_decompose, budget_bounds, max_terms, superpose, DiagOperator, Permutation,
    SolutionClass,
};
use funex_core::dynamics::{characteristic_roots, solve, Amplitudes, DynamicsParams, RootRegime};
use funex_core::exchange::{demand_functions, demand_price, supply_functions, supply_price, FrameReference};
use funex_core::industrial::{
    comparative_advantage, externality_metric, BlockPattern, Candidate, ExternalityClass, SplitOperators,
};
use funex_core::valuation::{prospect_value, Capacity, EventSet};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use support::{random_bistochastic, random_permutation};

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|m| Permutation::from_mapping(m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn birkhoff_reconstructs(seed in any::<u64>(), n in 1usize..7, k in 1usize..10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_bistochastic(n, k, &mut rng);
        let d = birkhoff_decompose(&m).unwrap();
        prop_assert!(d.reconstruction_error(&m) <= 1e-9);
        prop_assert!(d.len() <= max_terms(n));
        prop_assert!(d.terms().iter().all(|t| t.weight > 0.0));
        prop_assert!((d.weight_sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn superposition_covers_every_decomposition_term(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_bistochastic(n, 3, &mut rng);
        let d = birkhoff_decompose(&m).unwrap();
        let perms: Vec<Permutation> = d.terms().iter().map(|t| t.permutation.clone()).collect();
        let s = superpose(&perms).unwrap();
        for r in 0..n {
            for c in 0..n {
                prop_assert_eq!(s.get(r, c), m.get(r, c) > 0.0);
            }
        }
    }

    #[test]
    fn budgets_lie_within_rearrangement_bounds(
        e in prop::collection::vec(0.1f64..10.0, 1..7),
        seed in any::<u64>(),
    ) {
        let n = e.len();
        let mut rng = StdRng::seed_from_u64(seed);
        let i: Vec<f64> = e.iter().rev().map(|x| x * 0.7 + 0.2).collect();
        let (e, i) = (DiagOperator::cost(e).unwrap(), DiagOperator::information(i).unwrap());
        let (lo, hi) = budget_bounds(&e, &i).unwrap();
        let b = architect_budget(&e, &i, &random_permutation(n, &mut rng)).unwrap();
        prop_assert!(lo - 1e-12 * hi <= b && b <= hi + 1e-12 * hi);
    }

    #[test]
    fn classes_follow_thresholds(weights in prop::collection::vec(0.01f64..1.0, 1..6)) {
        let n = weights.len();
        let budgets: Vec<f64> = (0..n).map(|k| 1.0 + k as f64).collect();
        let lower: Vec<f64> = budgets.iter().map(|b| b * 0.5).collect();
        let upper: Vec<f64> = budgets.iter().map(|b| b * 2.0).collect();
        let r = assess(&weights, &budgets, &lower, &upper).unwrap();
        for t in &r.terms {
            let expected = if t.weight > r.w_plus {
                SolutionClass::Excellent
            } else if t.weight < r.w_minus {
                SolutionClass::Unsatisfactory
            } else {
                SolutionClass::Attractive
            };
            prop_assert_eq!(t.class, expected);
        }
    }

    #[test]
    fn price_curves_invert(rho in 0.1f64..10.0, m0 in 0.0f64..10.0, c in 0.5f64..5.0, m in 0.0f64..10.0) {
        let s = FrameReference::supply(rho, m0, c, 0.0).unwrap();
        let d = FrameReference::demand(rho, m0, c, 0.0).unwrap();
        let back = supply_functions(&s, supply_price(&s, m).unwrap()).unwrap();
        prop_assert!((back - m).abs() <= 1e-9 * m.abs().max(1.0));
        let back = demand_functions(&d, demand_price(&d, m).unwrap()).unwrap();
        prop_assert!((back - m).abs() <= 1e-9 * m.abs().max(1.0));
    }

    #[test]
    fn additive_capacity_gives_expected_value(
        raw in prop::collection::vec(0.01f64..1.0, 1..6),
        outcomes in prop::collection::vec(-10.0f64..10.0, 6),
    ) {
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
        let capacity = Capacity::additive(&probs).unwrap();
        let terms: Vec<(f64, EventSet)> = (0..probs.len())
            .map(|s| (outcomes[s], EventSet::from_states(&[s]).unwrap()))
            .collect();
        let v = prospect_value(&terms, &capacity, |x| x).unwrap();
        let expected: f64 = probs.iter().zip(&outcomes).map(|(p, x)| p * x).sum();
        prop_assert!((v - expected).abs() <= 1e-12);
    }

    #[test]
    fn roots_satisfy_the_characteristic_polynomial(
        kappa in prop_oneof![-10.0f64..-0.01, 0.01f64..10.0],
        c in 0.01f64..10.0,
        m in prop_oneof![-10.0f64..-0.01, 0.01f64..10.0],
        demand in any::<bool>(),
    ) {
        let p = if demand { DynamicsParams::demand(kappa, c, m) } else { DynamicsParams::supply(kappa, c, m) }.unwrap();
        let r = characteristic_roots(&p).unwrap();
        for g in r.roots {
            let scale = (kappa * g.norm_sqr()).abs().max(g.l1_norm()).max(r.m_over_c.abs()).max(1.0);
            prop_assert!(r.polynomial(g).l1_norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn solutions_satisfy_the_ode(
        kappa in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0],
        c in 0.5f64..3.0,
        m in prop_oneof![-3.0f64..-0.2, 0.2f64..3.0],
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
        demand in any::<bool>(),
    ) {
        let p = if demand { DynamicsParams::demand(kappa, c, m) } else { DynamicsParams::supply(kappa, c, m) }.unwrap();
        let s = solve(&p, Amplitudes::Pair(a, b)).unwrap();
        for k in 0..100 {
            let x = 5.0 * k as f64 / 99.0;
            let (v, d, dd) = s.jet(x);
            let scale = v.abs().max(d.abs()).max(dd.abs()).max(1.0);
            prop_assert!(s.residual(x).abs() <= 1e-9 * scale, "residual {} at {}", s.residual(x), x);
        }
        // closed-form derivative against a central difference
        if characteristic_roots(&p).unwrap().regime != RootRegime::RealRepeated {
            let x = 1.3;
            let h = 1e-5;
            let fd = (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
            prop_assert!((fd - s.derivative(x)).abs() <= 1e-6 * s.derivative(x).abs().max(1.0));
        }
    }

    #[test]
    fn demand_is_supply_with_mirrored_kappa(kappa in 0.2f64..3.0, c in 0.5f64..3.0, m in 0.2f64..3.0) {
        let d = solve(&DynamicsParams::demand(kappa, c, m).unwrap(), Amplitudes::Pair(1.0, 1.0)).unwrap();
        let s = solve(&DynamicsParams::supply(-kappa, c, m).unwrap(), Amplitudes::Pair(1.0, 1.0)).unwrap();
        for k in 0..20 {
            let x = k as f64 * 0.25;
            prop_assert!((d.eval(x) - s.eval(x)).abs() <= 1e-9 * d.eval(x).abs().max(1.0));
        }
    }

    #[test]
    fn externality_classes_are_exclusive(
        e in prop::collection::vec(-5.0f64..5.0, 3),
        i in prop::collection::vec(-5.0f64..5.0, 3),
        p in permutation(3),
    ) {
        let r = externality_metric(&e, &i, &p.to_support()).unwrap();
        let used_i_positive = (0..3).all(|l| i[l] > 0.0);
        let explicit = e.iter().all(|&x| x < 0.0) && used_i_positive;
        let expected = if explicit {
            ExternalityClass::ExplicitExternality
        } else if r.h < 0.0 {
            ExternalityClass::MajorDefault
        } else if !r.negative_terms.is_empty() && r.h > 0.0 {
            ExternalityClass::MinorDefault
        } else {
            ExternalityClass::Clean
        };
        prop_assert_eq!(r.classification, expected);
        prop_assert!(r.negative_terms.iter().all(|t| t.product < 0.0));
    }

    #[test]
    fn comparative_advantage_ignores_order(
        hs in prop::collection::vec(-3i32..4, 1..6),
        shift in 0usize..6,
    ) {
        let candidates: Vec<Candidate> = hs
            .iter()
            .enumerate()
            .map(|(k, &h)| Candidate {
                beta: 10 + k,
                e_split: vec![h as f64],
                i_split: vec![1.0],
                selection: Permutation::identity(1).to_support(),
            })
            .collect();
        let mut rotated = candidates.clone();
        rotated.rotate_left(shift % candidates.len());
        let a = comparative_advantage(&candidates).unwrap();
        let b = comparative_advantage(&rotated).unwrap();
        prop_assert_eq!((a.beta, a.tie), (b.beta, b.tie));
    }

    #[test]
    fn uniform_splits_conserve(
        e in prop::collection::vec(0.1f64..10.0, 1..5),
        orders in prop::collection::vec(1usize..4, 5),
        seed in any::<u64>(),
    ) {
        let n = e.len();
        let mut rng = StdRng::seed_from_u64(seed);
        let pattern = BlockPattern::new(random_permutation(n, &mut rng), orders[..n].to_vec()).unwrap();
        let i: Vec<f64> = e.iter().map(|x| x + 1.0).collect();
        let s = SplitOperators::uniform(&e, &i, &pattern).unwrap();
        prop_assert!(s.check_pattern(&pattern).is_ok());
        prop_assert!(SplitOperators::new(s.e_split, s.i_split, &e, &i).is_ok());
    }

    #[test]
    fn weighting_is_monotone_and_bounded(g in 0.3f64..2.0, p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        let (wl, wh) = (weight(g, lo).unwrap(), weight(g, hi).unwrap());
        prop_assert!((0.0..=1.0).contains(&wl) && (0.0..=1.0).contains(&wh));
        prop_assert!(wl <= wh);
    }

    #[test]
    fn fixed_point_stability_flips_at_one(g in prop_oneof![0.35f64..0.95, 1.05f64..1.9]) {
        let p = fixed_point(g).unwrap();
        prop_assert!((weight(g, p).unwrap() - p).abs() <= 1e-12);
        for q in [p - 0.01, p + 0.01].into_iter().filter(|q| (0.0..=1.0).contains(q)) {
            let closer = (weight(g, q).unwrap() - p).abs() < (q - p).abs();
            prop_assert_eq!(closer, g < 1.0);
        }
    }

    #[test]
    fn cycle_feeling_follows_the_gap(p0 in 0.01f64..0.99, outcome in -100.0f64..100.0) {
        let acc = business_cycle(p0, 0.618, outcome).unwrap();
        let expected = if (acc.p_star - p0).abs() <= 1e-12 {
            Feeling::Neutral
        } else if acc.p_star > p0 {
            Feeling::Profit
        } else {
            Feeling::Overinvestment
        };
        prop_assert_eq!(acc.feeling, expected);
    }
}
