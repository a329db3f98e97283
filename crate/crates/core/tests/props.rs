//! Property tests for the structural invariants: parse/render round trips,
//! canonical forms vs bisimilarity, extensionality, the satisfaction laws
//! and the unfolding bridge.

use std::sync::Arc;

use proptest::prelude::*;

use hypersets::bisim::{bisimilar, canonicalize, naive_bisim, quotient, refine_partition, SystemMap};
use hypersets::hyperset::{decorate, mostowski_collapse, HyperSet};
use hypersets::modal::{char_formula, modally_equivalent, normalize, satisfies, Formula};
use hypersets::parse_system;
use hypersets::system::{NodeId, System};

fn arb_system() -> impl Strategy<Value = System> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=12)
            .prop_map(move |edges| System::build(n, &edges, 0).unwrap())
    })
}

fn arb_dag() -> impl Strategy<Value = System> {
    (2usize..=8).prop_flat_map(|n| {
        prop::collection::vec((0..n - 1, 0..n), 0..=14).prop_map(move |raw| {
            let edges: Vec<(usize, usize)> = raw
                .into_iter()
                .map(|(a, b)| if a < b { (a, b) } else { (b, a + 1) })
                .collect();
            System::build(n, &edges, 0).unwrap()
        })
    })
}

fn arb_set() -> impl Strategy<Value = HyperSet> {
    arb_system().prop_map(|s| decorate(&s))
}

fn arb_formula() -> impl Strategy<Value = Arc<Formula>> {
    let leaf = prop_oneof![Just(Formula::top()), Just(Formula::bot())];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            inner.clone().prop_map(Formula::dia),
            inner.clone().prop_map(Formula::box_),
            prop::collection::vec(inner.clone(), 0..=3).prop_map(Formula::and),
            prop::collection::vec(inner.clone(), 0..=3).prop_map(Formula::or),
            prop::collection::vec(inner, 0..=3).prop_map(Formula::delta),
        ]
    })
}

proptest! {
    #[test]
    fn parse_render_round_trip(s in arb_system()) {
        let again = parse_system(&s.render()).unwrap();
        prop_assert_eq!(&again, &s);
    }

    #[test]
    fn children_stay_inside_node_set(s in arb_system()) {
        for x in s.nodes() {
            for &c in s.children(x).unwrap() {
                prop_assert!(c.index() < s.len());
            }
        }
    }

    #[test]
    fn refinement_agrees_with_naive_oracle(s in arb_system(), t in arb_system()) {
        let oracle = naive_bisim(&s, &t);
        let oracle_eq = oracle.same_block(s.root().index(), t.root().index() + s.len());
        prop_assert_eq!(bisimilar(&s, &t), oracle_eq);
    }

    #[test]
    fn canonical_forms_iff_bisimilar(s in arb_system(), t in arb_system()) {
        prop_assert_eq!(bisimilar(&s, &t), canonicalize(&s) == canonicalize(&t));
    }

    #[test]
    fn canonicalize_idempotent_and_deterministic(s in arb_system()) {
        let once = canonicalize(&s);
        prop_assert_eq!(&canonicalize(&s), &once);
        prop_assert_eq!(&canonicalize(&once), &once);
    }

    #[test]
    fn quotient_is_minimal(s in arb_system()) {
        prop_assert!(refine_partition(&quotient(&s)).is_discrete());
    }

    #[test]
    fn bisimilarity_is_an_equivalence(
        s in arb_system(),
        t in arb_system(),
        u in arb_system(),
    ) {
        prop_assert!(bisimilar(&s, &s));
        prop_assert_eq!(bisimilar(&s, &t), bisimilar(&t, &s));
        if bisimilar(&s, &t) && bisimilar(&t, &u) {
            prop_assert!(bisimilar(&s, &u));
        }
    }

    #[test]
    fn identity_is_a_system_map(s in arb_system()) {
        let id: Vec<NodeId> = s.nodes().collect();
        let map = SystemMap::new(s.clone(), s.clone(), id).unwrap();
        prop_assert!(bisimilar(map.source(), map.target()));
    }

    #[test]
    fn decorate_agrees_with_collapse_on_dags(s in arb_dag()) {
        prop_assert_eq!(decorate(&s), mostowski_collapse(&s).unwrap());
    }

    #[test]
    fn extensionality(a in arb_set(), b in arb_set()) {
        let same_members = a.members().len() == b.members().len()
            && a.members().iter().all(|m| m.is_member(&b))
            && b.members().iter().all(|m| m.is_member(&a));
        prop_assert_eq!(a == b, same_members);
    }

    #[test]
    fn insert_is_idempotent(a in arb_set(), b in arb_set()) {
        let once = HyperSet::insert(&a, &b);
        prop_assert_eq!(HyperSet::insert(&a, &once), once);
    }

    #[test]
    fn pair_collapses_to_singleton(a in arb_set()) {
        prop_assert_eq!(HyperSet::pair(&a, &a), HyperSet::singleton(&a));
    }

    #[test]
    fn unfoldings_are_wellfounded(a in arb_set(), k in 0usize..=8) {
        prop_assert!(a.unfold(k).is_wellfounded());
    }

    #[test]
    fn sa1_exactly_one_of_f_and_not_f(a in arb_set(), f in arb_formula()) {
        prop_assert!(satisfies(&a, &Formula::neg(f.clone())) ^ satisfies(&a, &f));
    }

    #[test]
    fn sa2_matches_elementwise_evaluation(
        a in arb_set(),
        fs in prop::collection::vec(arb_formula(), 0..=3),
    ) {
        let conj = Formula::and(fs.clone());
        let elementwise = fs.iter().all(|f| satisfies(&a, f));
        prop_assert_eq!(satisfies(&a, &conj), elementwise);
    }

    #[test]
    fn sa3_matches_member_enumeration(a in arb_set(), f in arb_formula()) {
        let by_members = a.members().iter().any(|m| satisfies(m, &f));
        prop_assert_eq!(satisfies(&a, &Formula::dia(f)), by_members);
    }

    #[test]
    fn normalize_preserves_satisfaction(a in arb_set(), f in arb_formula()) {
        prop_assert_eq!(satisfies(&a, &f), satisfies(&a, &normalize(&f)));
    }

    #[test]
    fn unfolding_bridge(a in arb_set(), b in arb_set(), k in 0usize..=4) {
        let phi = char_formula(&a, k).unwrap();
        prop_assert_eq!(satisfies(&b, &phi), a.unfold(k) == b.unfold(k));
    }

    #[test]
    fn deep_unfold_equality_is_set_equality(s in arb_system(), t in arb_system()) {
        let rank = s.len() + t.len();
        let a = decorate(&s);
        let b = decorate(&t);
        prop_assert_eq!(a.unfold(rank) == b.unfold(rank), a == b);
        prop_assert_eq!(modally_equivalent(&a, &b, rank).unwrap(), a == b);
    }
}
