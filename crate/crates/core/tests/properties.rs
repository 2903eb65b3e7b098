//! Property tests over random rule systems.

mod common;

use proptest::prelude::*;

use ruletree::dsl::{parse_system, to_dsl};
use ruletree::generators::{random_system, RandomConstraints};
use ruletree::solver::{lower_bound, min_depth, sequential_tree, SolveLimits};
use ruletree::tree_io::{tree_from_json, tree_to_json};
use ruletree::verify::verify;
use ruletree::{Mode, ProblemKind, RuleSystem};

use common::Naive;

fn systems(max_n: usize, max_k: usize) -> impl Strategy<Value = RuleSystem> {
    (1..=max_n, 1..=max_k, any::<u64>(), 0u8..3).prop_flat_map(move |(n, k, seed, kind)| {
        (1..=n).prop_map(move |d| {
            let constraints = RandomConstraints {
                sr_reduced: kind == 1,
                ad_reduced: kind == 2,
                max_rules: Some(6),
                ..RandomConstraints::default()
            };
            random_system(n, d, k, seed, &constraints).unwrap()
        })
    })
}

fn problems() -> impl Strategy<Value = ProblemKind> {
    prop::sample::select(ProblemKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_roundtrip(s in systems(5, 3)) {
        prop_assert_eq!(parse_system(&to_dsl(&s)).unwrap(), s);
    }

    #[test]
    fn solver_tree_is_optimal_and_valid(s in systems(4, 2), p in problems()) {
        let r = min_depth(&s, p, SolveLimits::default()).unwrap();
        prop_assert!(verify(&r.tree, &s, p).unwrap().is_solving());
        prop_assert_eq!(r.tree.depth(), r.depth);
        prop_assert_eq!(r.depth, Naive::new(&s, p).min_depth());
        prop_assert!(lower_bound(&s, p) <= r.depth);
    }

    #[test]
    fn sequential_tree_solves(s in systems(5, 3), p in problems()) {
        let t = sequential_tree(&s, p).unwrap();
        prop_assert!(verify(&t, &s, p).unwrap().is_solving());
        prop_assert!(t.depth() <= s.n());
    }

    #[test]
    fn tree_file_roundtrip(s in systems(4, 3), p in problems()) {
        let t = min_depth(&s, p, SolveLimits::default()).unwrap().tree;
        prop_assert_eq!(tree_from_json(&tree_to_json(&t, &s), &s).unwrap(), t);
    }

    #[test]
    fn reduction_is_idempotent(s in systems(5, 3)) {
        for mode in [Mode::Sr, Mode::Ad] {
            let r = s.reduce(mode);
            prop_assert!(r.is_reduced(mode));
            prop_assert_eq!(r.reduce(mode), r.clone());
        }
    }

    #[test]
    fn deeper_labels_never_hurt(s in systems(4, 2)) {
        // answering every problem with AR-labels works for AD and SR too
        for (strong, weak) in [(ProblemKind::AR, ProblemKind::AD), (ProblemKind::AD, ProblemKind::SR)] {
            let t = min_depth(&s, strong, SolveLimits::default()).unwrap().tree;
            prop_assert!(verify(&t, &s, weak).unwrap().is_solving());
        }
    }
}
