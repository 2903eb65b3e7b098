//! Checking that a tree solves `AR`/`AD`/`SR` (or the extended variants).

use std::collections::BTreeSet;
use std::fmt;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::system::RuleSystem;
use crate::tree::{CompletePath, DecisionTree, ProblemKind, Semantics};

/// A complete path whose terminal label breaks the problem's condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub path: CompletePath,
    pub reason: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solves,
    Fails(Counterexample),
}

impl Verdict {
    pub fn is_solving(&self) -> bool {
        matches!(self, Verdict::Solves)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Solves => None,
            Verdict::Fails(c) => Some(c),
        }
    }
}

/// Whether `tree` solves `problem` for `system`.
///
/// Only paths with a consistent `K(ξ)` are checked. Errors when the tree is
/// malformed or its variant does not fit the problem.
pub fn verify(tree: &DecisionTree, system: &RuleSystem, problem: ProblemKind) -> Result<Verdict> {
    if tree.variant != problem.variant() {
        return Err(Error::VariantMismatch {
            variant: tree.variant.to_string(),
            problem: problem.to_string(),
        });
    }
    tree.well_formed(system)
        .map_err(|m| Error::MalformedTree(m.to_string()))?;
    for path in tree.complete_paths() {
        let Some(alpha) = path.assignment() else {
            continue;
        };
        if let Some(reason) = label_violation(system, &alpha, &path.rules, problem.semantics()) {
            return Ok(Verdict::Fails(Counterexample { path, reason }));
        }
    }
    Ok(Verdict::Solves)
}

/// Why `tau` is not an acceptable answer at `alpha`, if it is not.
pub fn label_violation(
    system: &RuleSystem,
    alpha: &Assignment,
    tau: &BTreeSet<usize>,
    semantics: Semantics,
) -> Option<String> {
    for &i in tau {
        if !alpha.covers(system.rule(i)) {
            return Some(format!("r{} is in the label but not realized", i + 1));
        }
    }
    let alive_outside = |skip: &dyn Fn(usize) -> bool| {
        (0..system.len())
            .find(|&i| !tau.contains(&i) && !skip(i) && alpha.agrees_with(system.rule(i)))
    };
    let missed = match semantics {
        Semantics::AllRules => alive_outside(&|_| false),
        Semantics::AllDecisions => {
            let covered = system.decisions_of(tau);
            alive_outside(&|i| covered.contains(&system.rule(i).rhs()))
        }
        Semantics::SomeRules if tau.is_empty() => alive_outside(&|_| false),
        Semantics::SomeRules => None,
    };
    missed.map(|i| format!("r{} may be realizable but is not accounted for", i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_system;
    use crate::rule::{AttrId, Value};
    use crate::tree::{Node, Variant};

    fn chain() -> RuleSystem {
        parse_system("a1=0 -> 0\na2=0 -> 0\na3=0 -> 0").unwrap()
    }

    fn one_query(label: usize) -> DecisionTree {
        DecisionTree::new(
            Variant::O,
            Node::working(AttrId(1), [(Value::Num(0), Node::terminal([label]))]),
        )
    }

    #[test]
    fn single_query_solves_sr_and_ad() {
        let s = chain();
        let t = one_query(0);
        assert!(verify(&t, &s, ProblemKind::SR).unwrap().is_solving());
        assert!(verify(&t, &s, ProblemKind::AD).unwrap().is_solving());
        assert!(!verify(&t, &s, ProblemKind::AR).unwrap().is_solving());
    }

    #[test]
    fn wrong_label_is_caught() {
        let s = chain();
        let v = verify(&one_query(1), &s, ProblemKind::SR).unwrap();
        let c = v.counterexample().unwrap();
        assert_eq!(c.path.hops, vec![(AttrId(1), Value::Num(0))]);
    }

    #[test]
    fn variant_mismatch() {
        let s = chain();
        assert!(matches!(
            verify(&one_query(0), &s, ProblemKind::ESR),
            Err(Error::VariantMismatch { .. })
        ));
    }

    #[test]
    fn inconsistent_paths_are_unconstrained() {
        let s = parse_system("a1=0 -> 0\na1=1 -> 1").unwrap();
        let inner = Node::working(
            AttrId(1),
            [
                (Value::Num(0), Node::terminal([1])),
                (Value::Num(1), Node::terminal([1])),
            ],
        );
        let t = DecisionTree::new(
            Variant::O,
            Node::working(
                AttrId(1),
                [
                    (
                        Value::Num(0),
                        inner.clone().map_terminals(&mut |_| [0].into()),
                    ),
                    (Value::Num(1), inner),
                ],
            ),
        );
        assert!(verify(&t, &s, ProblemKind::AR).unwrap().is_solving());
    }
}
