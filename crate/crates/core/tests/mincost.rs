mod common;

use common::{instance_with_costs, BOUND};
use popmax_core::oracle::{brute_is_popular_max, brute_min_cost_popular_max, brute_stable};
use popmax_core::{
    is_stable, matching_cost, min_cost_popular_max, min_cost_stable, verify_certificate,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn min_cost_matches_oracle(inst in instance_with_costs(4, 4, 9)) {
        let sol = min_cost_popular_max(&inst);
        let (_, best) = brute_min_cost_popular_max(&inst, BOUND).unwrap();
        prop_assert_eq!(sol.cost, best);
        prop_assert_eq!(matching_cost(&inst, &sol.matching), sol.cost);
        prop_assert!(brute_is_popular_max(&inst, &sol.matching, BOUND).unwrap());
        prop_assert!(verify_certificate(&inst, &sol.matching, &sol.certificate).unwrap().is_empty());
    }

    #[test]
    fn min_cost_stable_matches_oracle(inst in instance_with_costs(4, 4, 9)) {
        let m = min_cost_stable(&inst);
        prop_assert!(is_stable(&inst, &m));
        let best = brute_stable(&inst, BOUND)
            .unwrap()
            .iter()
            .map(|s| matching_cost(&inst, s))
            .min()
            .unwrap();
        prop_assert_eq!(matching_cost(&inst, &m), best);
    }
}
