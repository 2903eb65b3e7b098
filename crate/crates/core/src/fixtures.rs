//! Small hand-checked systems and trees, used by the regression section of
//! the audit and by tests.

use crate::assignment::Assignment;
use crate::dsl::parse_system;
use crate::rule::{AttrId, Value};
use crate::system::RuleSystem;
use crate::tree::{DecisionTree, Node, Variant};

fn sys(text: &str) -> RuleSystem {
    parse_system(text).expect("fixture parses")
}

fn num(v: u64) -> Value {
    Value::Num(v)
}

fn query(attr: u32, edges: impl IntoIterator<Item = (Value, Node)>) -> Node {
    Node::working(AttrId(attr), edges)
}

fn leaf(rules: impl IntoIterator<Item = usize>) -> Node {
    Node::terminal(rules)
}

/// `n=4, d=3, k=3, D={3,4,5}`.
pub fn profile_sample() -> RuleSystem {
    sys("a1=0 & a2=0 & a3=0 -> 3\na1=1 & a4=0 -> 4\na1=2 -> 5")
}

/// Two rules and the tuple `(0,0,0)`: the first is realizable, the second not.
pub fn realizability_sample() -> (RuleSystem, Assignment) {
    let s = sys("a1=0 & a2=0 -> 0\na1=0 & a3=1 -> 1");
    let t = (1..=3).map(|a| (AttrId(a), num(0))).collect();
    (s, t)
}

/// Nested left-hand sides, all realizable at `(0,0,0)`.
pub fn nested_sample() -> (RuleSystem, Assignment) {
    let s = sys("a1=0 & a2=0 & a3=0 -> 0\na1=0 & a2=0 -> 1\na1=0 -> 0");
    let t = (1..=3).map(|a| (AttrId(a), num(0))).collect();
    (s, t)
}

pub fn branching_sample() -> RuleSystem {
    sys("a1=0 & a2=0 -> 0\na1=1 & a3=0 -> 0\na1=1 -> 0")
}

/// Solves `AR` for [`branching_sample`].
pub fn branching_o_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::O,
        query(
            1,
            [
                (num(0), query(2, [(num(0), leaf([0]))])),
                (num(1), query(3, [(num(0), leaf([1, 2]))])),
            ],
        ),
    )
}

/// Solves `EAR` for [`branching_sample`].
pub fn branching_e_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::E,
        query(
            1,
            [
                (
                    num(0),
                    query(2, [(num(0), leaf([0])), (Value::Star, leaf([]))]),
                ),
                (
                    num(1),
                    query(3, [(num(0), leaf([1, 2])), (Value::Star, leaf([2]))]),
                ),
                (Value::Star, leaf([])),
            ],
        ),
    )
}

pub fn mixed_decisions_sample() -> RuleSystem {
    sys("a1=0 & a2=0 -> 0\na1=1 & a3=0 -> 1\na1=1 -> 1\na1=1 -> 2")
}

/// Solves `AR` for [`mixed_decisions_sample`].
pub fn mixed_ar_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::O,
        query(
            1,
            [
                (num(0), query(2, [(num(0), leaf([0]))])),
                (num(1), query(3, [(num(0), leaf([1, 2, 3]))])),
            ],
        ),
    )
}

/// Solves `AD` for [`mixed_decisions_sample`].
pub fn mixed_ad_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::O,
        query(
            1,
            [
                (num(0), query(2, [(num(0), leaf([0]))])),
                (num(1), leaf([2, 3])),
            ],
        ),
    )
}

/// Solves `SR` for [`mixed_decisions_sample`].
pub fn mixed_sr_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::O,
        query(
            1,
            [
                (num(0), query(2, [(num(0), leaf([0]))])),
                (num(1), leaf([2])),
            ],
        ),
    )
}

/// Reduces to `{a1=0 & a2=0 -> 0, a1=0 -> 1}` (AD) and `{a1=0 -> 1}` (SR).
pub fn reduction_sample() -> RuleSystem {
    sys("a1=0 & a2=0 & a3=0 -> 0\na1=0 & a2=0 -> 0\na1=0 -> 1")
}

/// Three pairwise-overlapping rules; node cover number 2.
pub fn triangle_sample() -> RuleSystem {
    sys("a1=0 & a2=0 -> 0\na1=1 & a3=0 -> 0\na2=1 & a3=1 -> 0")
}

/// Solves `AR` for [`triangle_sample`], querying `a3` first.
pub fn triangle_ar_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::O,
        query(
            3,
            [
                (
                    num(0),
                    query(
                        1,
                        [
                            (num(0), query(2, [(num(0), leaf([0])), (num(1), leaf([]))])),
                            (num(1), leaf([1])),
                        ],
                    ),
                ),
                (
                    num(1),
                    query(
                        2,
                        [
                            (num(0), query(1, [(num(0), leaf([0])), (num(1), leaf([]))])),
                            (num(1), leaf([2])),
                        ],
                    ),
                ),
            ],
        ),
    )
}

/// `{a3=0}`
pub fn triangle_alpha() -> Assignment {
    [(AttrId(3), num(0))].into_iter().collect()
}

/// [`triangle_ar_tree`] after edge pruning for [`triangle_alpha`].
pub fn triangle_pruned_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::O,
        query(
            3,
            [(
                num(0),
                query(
                    1,
                    [
                        (num(0), query(2, [(num(0), leaf([0]))])),
                        (num(1), leaf([1])),
                    ],
                ),
            )],
        ),
    )
}

/// The restricted tree over `{a1=0 & a2=0 -> 0, a1=1 -> 0}`.
pub fn triangle_restricted_tree() -> DecisionTree {
    DecisionTree::new(
        Variant::O,
        query(
            1,
            [
                (num(0), query(2, [(num(0), leaf([0]))])),
                (num(1), leaf([1])),
            ],
        ),
    )
}

/// Mixes unit rules with two empty ones; exercises the core subsystems.
pub fn core_sample() -> RuleSystem {
    sys("a1=0 -> 0\na1=1 -> 1\n-> 1\n-> 2")
}

/// Leaves the tuple `(1,1)` without any consistent rule.
pub fn incomplete_sample() -> RuleSystem {
    sys("a1=0 & a2=0 -> 0\na1=1 & a2=0 -> 0\na1=0 & a2=1 -> 0")
}
