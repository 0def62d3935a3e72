use costshare::analysis::{evaluate_run, Mechanism};
use costshare::costs::alpha::{alpha_average_decreasing, alpha_max_bounded, alpha_min_bounded, alpha_min_bounded_ns};
use costshare::generators::{concave_profile, default_grid, random_nondecreasing_table, random_symmetric, rng};
use costshare::mechanisms::{greedy_bundle, iacsm_run, sm_run_default};
use costshare::valuations::gen_symmetric_submodular_with;
use costshare::{Allocation, AllocationCostFn, CostFn, Factor, NsKind, Rat, Subset};
use proptest::prelude::*;

fn steps() -> Vec<Rat> {
    [0, 1, 2, 3].map(Rat::int).to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn max_bounded_dominates_min_bounded(n in 1usize..=6, seed in any::<u64>()) {
        let c = random_nondecreasing_table(n, &steps(), &mut rng(seed)).unwrap();
        let lo = alpha_min_bounded(&c).unwrap().alpha;
        let hi = alpha_max_bounded(&c).unwrap().alpha;
        prop_assert!(hi >= lo);
    }

    #[test]
    fn symmetric_submodular_costs_are_average_decreasing(n in 1usize..=7, seed in any::<u64>()) {
        let profile = concave_profile(n, &default_grid(), &mut rng(seed)).unwrap();
        let c = CostFn::symmetric(&profile).unwrap();
        prop_assert_eq!(alpha_average_decreasing(&c).unwrap().alpha, Factor::Finite(Rat::one()));
    }

    #[test]
    fn greedy_matches_brute_force(m in 1usize..=12, seed in any::<u64>()) {
        let mut r = rng(seed);
        let grid = default_grid();
        let v = gen_symmetric_submodular_with(m, &grid, &mut r).unwrap();
        let shares: Vec<Rat> = (0..m).map(|j| grid[(seed as usize / (j + 1)) % grid.len()]).collect();
        let utility = |s: Subset| v.value_of_size(s.len()) - s.iter().map(|j| shares[j]).sum::<Rat>();
        let best = Subset::all(m).map(utility).max().unwrap();
        let got = greedy_bundle(&v, &shares);
        prop_assert_eq!(utility(got), best);
        // Largest among the optimal bundles.
        prop_assert!(Subset::all(m).filter(|&s| utility(s) == best).all(|s| s.len() <= got.len()));
    }

    #[test]
    fn mechanisms_are_deterministic(n in 1usize..=5, m in 1usize..=3, seed in any::<u64>()) {
        let inst = random_symmetric(n, m, &default_grid(), &mut rng(seed)).unwrap();
        prop_assert_eq!(iacsm_run(&inst).unwrap(), iacsm_run(&inst).unwrap());
        prop_assert_eq!(sm_run_default(&inst).unwrap(), sm_run_default(&inst).unwrap());
        let a = evaluate_run(&inst, &Mechanism::sm()).unwrap();
        let b = evaluate_run(&inst, &Mechanism::sm()).unwrap();
        prop_assert_eq!(a.optimum, b.optimum);
    }

    #[test]
    fn allocation_cost_is_monotone(n in 1usize..=4, m in 1usize..=3, seed in any::<u64>(), code in any::<u64>()) {
        let mut r = rng(seed);
        let costs: Vec<CostFn> = (0..m).map(|_| random_nondecreasing_table(n, &steps(), &mut r).unwrap()).collect();
        let vals = (0..n).map(|_| costshare::ValuationFn::symmetric(vec![Rat::zero(); m]).unwrap()).collect();
        let inst = costshare::Instance::separable(vals, costs).unwrap();
        let total = Allocation::count(n, m);
        let big = Allocation::nth(n, m, code % total);
        let small = Allocation::from_bundles(
            m,
            big.bundles().iter().map(|b| Subset(b.0 & (code >> 7) as u32)).collect(),
        ).unwrap();
        prop_assert!(small.is_subset_of(&big));
        prop_assert!(inst.allocation_cost(&small).unwrap() <= inst.allocation_cost(&big).unwrap());
    }

    #[test]
    fn lifted_single_item_matches_separable_estimator(n in 1usize..=6, seed in any::<u64>()) {
        let c = random_nondecreasing_table(n, &steps(), &mut rng(seed)).unwrap();
        let ns = AllocationCostFn::new(n, 1, NsKind::Lifted(vec![c.clone()])).unwrap();
        prop_assert_eq!(
            alpha_min_bounded_ns(&ns, None).unwrap().alpha,
            alpha_min_bounded(&c).unwrap().alpha
        );
    }
}
