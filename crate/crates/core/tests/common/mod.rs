//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use ruletree::{ProblemKind, RuleSystem, Semantics, Value};

/// Minimum depth by plain exhaustive search over strategies, with no
/// memoized subresults and with repeated queries allowed.
///
/// A node whose equations `α` are consistent may stop once some subset `τ`
/// of rules is an acceptable label: every rule of `τ` has all its equations
/// in `α`, and every rule that still matters (any rule for `AR`, a rule
/// with a decision outside `D(τ)` for `AD`, any rule when `τ = ∅` for `SR`)
/// contradicts `α`. Labels are found by trying every subset.
pub struct Naive<'a> {
    system: &'a RuleSystem,
    semantics: Semantics,
    domains: Vec<Vec<Value>>,
    /// Rule left-hand sides as (attribute position, value).
    lhs: Vec<Vec<(usize, Value)>>,
    labels: HashMap<Vec<Option<Value>>, bool>,
}

impl<'a> Naive<'a> {
    pub fn new(system: &'a RuleSystem, problem: ProblemKind) -> Self {
        let profile = system.profile();
        let domains = profile
            .attrs
            .iter()
            .map(|&a| {
                let mut dom: Vec<Value> = profile.values(a).map(Value::Num).collect();
                if problem.is_extended() {
                    dom.push(Value::Star);
                }
                dom
            })
            .collect();
        let lhs = system
            .rules()
            .iter()
            .map(|r| {
                r.lhs()
                    .iter()
                    .map(|&(a, v)| {
                        (
                            profile.attrs.iter().position(|&b| b == a).unwrap(),
                            Value::Num(v),
                        )
                    })
                    .collect()
            })
            .collect();
        Naive {
            system,
            semantics: problem.semantics(),
            domains,
            lhs,
            labels: HashMap::new(),
        }
    }

    fn realized(&self, i: usize, alpha: &[Option<Value>]) -> bool {
        self.lhs[i].iter().all(|&(a, v)| alpha[a] == Some(v))
    }

    fn contradicted(&self, i: usize, alpha: &[Option<Value>]) -> bool {
        self.lhs[i]
            .iter()
            .any(|&(a, v)| alpha[a].is_some_and(|w| w != v))
    }

    fn acceptable(&self, tau: u64, alpha: &[Option<Value>]) -> bool {
        let m = self.system.len();
        let inside = |i: usize| tau & (1 << i) != 0;
        if (0..m).any(|i| inside(i) && !self.realized(i, alpha)) {
            return false;
        }
        let covered: Vec<u64> = (0..m)
            .filter(|&i| inside(i))
            .map(|i| self.system.rule(i).rhs())
            .collect();
        (0..m).filter(|&i| !inside(i)).all(|i| {
            let matters = match self.semantics {
                Semantics::AllRules => true,
                Semantics::AllDecisions => !covered.contains(&self.system.rule(i).rhs()),
                Semantics::SomeRules => tau == 0,
            };
            !matters || self.contradicted(i, alpha)
        })
    }

    fn has_label(&mut self, alpha: &[Option<Value>]) -> bool {
        if let Some(&b) = self.labels.get(alpha) {
            return b;
        }
        let found = (0..1u64 << self.system.len()).any(|tau| self.acceptable(tau, alpha));
        self.labels.insert(alpha.to_vec(), found);
        found
    }

    fn solvable(&mut self, alpha: &mut Vec<Option<Value>>, depth: usize) -> bool {
        if self.has_label(alpha) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        for a in 0..self.domains.len() {
            let prior = alpha[a];
            let mut all = true;
            for j in 0..self.domains[a].len() {
                let v = self.domains[a][j];
                // a re-query answered differently gives an inconsistent path
                if prior.is_some_and(|p| p != v) {
                    continue;
                }
                alpha[a] = Some(v);
                let ok = self.solvable(alpha, depth - 1);
                alpha[a] = prior;
                if !ok {
                    all = false;
                    break;
                }
            }
            if all {
                return true;
            }
        }
        false
    }

    pub fn min_depth(&mut self) -> usize {
        let mut alpha = vec![None; self.domains.len()];
        (0..).find(|&h| self.solvable(&mut alpha, h)).unwrap()
    }
}
