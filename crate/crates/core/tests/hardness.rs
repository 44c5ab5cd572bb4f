use popmax_core::hardness::{
    check_reduction, matching_to_assignment, reduce, transform_formula, pad_unit_clauses,
    CnfFormula, GadgetState, HardnessError,
};
use popmax_core::oracle::brute_sat;
use popmax_core::{is_pareto_optimal, matching_cost, WitnessKind};
use proptest::prelude::*;

fn formula(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_vars).prop_flat_map(move |nv| {
        let lit = (1..=nv as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        proptest::collection::vec(proptest::collection::vec(lit, 1..=3), 1..=max_clauses)
            .prop_map(move |cs| CnfFormula::new(nv, cs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_holds_both_ways(psi in formula(3, 4)) {
        let r = check_reduction(&psi).unwrap();
        prop_assert_eq!(r.satisfiable, brute_sat(&psi).is_some());
        prop_assert_eq!(r.prune_failures, 0);
        prop_assert!(r.consistency_holds);
        prop_assert!(r.equivalence_holds(), "{:?}", r);
    }

    #[test]
    fn transformation_preserves_satisfiability(psi in formula(4, 6)) {
        let t = transform_formula(&pad_unit_clauses(&psi)).unwrap();
        prop_assert_eq!(brute_sat(&psi).is_some(), brute_sat(&t).is_some());
        for c in t.clauses() {
            prop_assert!(c.len() >= 2 && c.len() <= 3);
        }
    }
}

/// (x1 ∨ x2 ∨ x3) after transformation, in the state of x = (T, F, F).
fn fixture() -> (popmax_core::hardness::GadgetInstance, GadgetState) {
    let psi = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
    let g = reduce(&psi).unwrap();
    let n = g.formula.num_vars();
    let mut x = vec![false; n];
    x[0] = true;
    x[4..=5].fill(true);
    assert_eq!(n, 6);
    assert!(g.formula.eval(&x));
    let st = GadgetState {
        variable_true: x.clone(),
        occurrence_true: g.occurrences.iter().map(|o| x[o.var]).collect(),
    };
    (g, st)
}

#[test]
fn satisfying_state_is_pareto_optimal_and_free() {
    let (g, st) = fixture();
    let m = g.state_matching(&st);
    assert_eq!(matching_cost(&g.instance, &m), 0);
    assert_eq!(2 * m.len(), g.instance.num_a() + g.instance.num_b());
    assert!(is_pareto_optimal(&g.instance, &m).optimal);
    assert_eq!(matching_to_assignment(&g, &m).unwrap(), st.variable_true);
}

#[test]
fn true_occurrence_of_false_variable_is_dominated() {
    let (g, mut st) = fixture();
    let k = g.occurrences.iter().position(|o| !st.variable_true[o.var]).unwrap();
    st.occurrence_true[k] = true;
    let m = g.state_matching(&st);
    let v = is_pareto_optimal(&g.instance, &m);
    assert!(!v.optimal);
    assert_eq!(v.witness.unwrap().kind, WitnessKind::Cycle);
    assert!(matches!(
        matching_to_assignment(&g, &m),
        Err(HardnessError::NotParetoOptimal)
    ));
}

#[test]
fn both_variables_of_a_negative_clause_true_is_dominated() {
    let (g, mut st) = fixture();
    let v = (0..6).find(|&v| !st.variable_true[v]).unwrap();
    assert!(st.variable_true[g.variables[v].partner]);
    st.variable_true[v] = true;
    let m = g.state_matching(&st);
    let verdict = is_pareto_optimal(&g.instance, &m);
    assert!(!verdict.optimal);
    assert_eq!(verdict.witness.unwrap().kind, WitnessKind::Cycle);
}

#[test]
fn all_false_positive_clause_is_dominated() {
    let (g, mut st) = fixture();
    let clause = g.occurrences[0].clause;
    for (k, o) in g.occurrences.iter().enumerate() {
        if o.clause == clause {
            st.occurrence_true[k] = false;
        }
    }
    let m = g.state_matching(&st);
    let verdict = is_pareto_optimal(&g.instance, &m);
    assert!(!verdict.optimal);
    assert_eq!(verdict.witness.unwrap().kind, WitnessKind::Cycle);
}

#[test]
fn oversized_formulas_are_refused() {
    let psi = CnfFormula::new(5, vec![vec![1, 2, 3]]).unwrap();
    assert!(matches!(check_reduction(&psi), Err(HardnessError::SizeBound { .. })));
}
