//! Exact minimum-depth trees.
//!
//! The search is over strategies that never query an attribute twice: a
//! repeated query either returns a known value or leads to an inconsistent,
//! unconstrained path, so it never helps. States are partial assignments on
//! `A(S)`, memoized; the value of a state is `0` when a terminal label
//! exists and otherwise `min_a 1 + max_δ h(α ∪ {a=δ})`.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use crate::assignment::Assignment;
use crate::cover::node_cover_number;
use crate::error::{Error, Result};
use crate::rule::{AttrId, Value};
use crate::system::{Mode, RuleSystem};
use crate::tree::{DecisionTree, Node, ProblemKind, Semantics};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_states: usize,
    pub timeout: Duration,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_states: 10_000_000,
            timeout: Duration::from_secs(60),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    /// Distinct states evaluated.
    pub states: usize,
    pub memo_hits: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub depth: usize,
    pub tree: DecisionTree,
    pub stats: SolveStats,
}

/// The label a terminal at `alpha` may carry, if one exists.
///
/// `alpha` values must come from `V_S` for `AR`/`AD`/`SR` and from `EV_S`
/// for the extended problems.
pub fn terminal_label(
    system: &RuleSystem,
    alpha: &Assignment,
    problem: ProblemKind,
) -> Result<Option<BTreeSet<usize>>> {
    let profile = system.profile();
    for (a, v) in alpha.iter() {
        if !profile.has_attr(a) {
            return Err(Error::UnknownAttribute { attr: a });
        }
        if !profile.admits(a, v, problem.is_extended()) {
            return Err(Error::InadmissibleValue { attr: a, value: v });
        }
    }
    Ok(decide(
        system,
        problem.semantics(),
        |i| alpha.covers(system.rule(i)),
        |i| !alpha.agrees_with(system.rule(i)),
    ))
}

fn decide(
    system: &RuleSystem,
    semantics: Semantics,
    real: impl Fn(usize) -> bool,
    dead: impl Fn(usize) -> bool,
) -> Option<BTreeSet<usize>> {
    let all = 0..system.len();
    let real_set: BTreeSet<usize> = all.clone().filter(|&i| real(i)).collect();
    let ok = match semantics {
        Semantics::AllRules => all.clone().all(|i| real_set.contains(&i) || dead(i)),
        Semantics::AllDecisions => {
            let covered = system.decisions_of(&real_set);
            all.clone().all(|i| {
                real_set.contains(&i) || covered.contains(&system.rule(i).rhs()) || dead(i)
            })
        }
        Semantics::SomeRules => !real_set.is_empty() || all.clone().all(&dead),
    };
    ok.then_some(real_set)
}

/// The label used when `A(S)` is empty and no query is possible.
fn trivial_label(system: &RuleSystem, semantics: Semantics) -> BTreeSet<usize> {
    match semantics {
        Semantics::AllRules => (0..system.len()).collect(),
        Semantics::AllDecisions => {
            let mut seen = BTreeSet::new();
            (0..system.len())
                .filter(|&i| seen.insert(system.rule(i).rhs()))
                .collect()
        }
        Semantics::SomeRules => [0].into(),
    }
}

/// Per-attribute codes: 0 is unqueried, `j + 1` is the `j`-th domain value.
struct Encoded<'a> {
    system: &'a RuleSystem,
    attrs: Vec<AttrId>,
    domains: Vec<Vec<Value>>,
    /// Rule equations as `(attribute position, code)`.
    rules: Vec<Vec<(usize, u8)>>,
    semantics: Semantics,
}

impl<'a> Encoded<'a> {
    fn new(system: &'a RuleSystem, problem: ProblemKind) -> Result<Self> {
        let profile = system.profile();
        let attrs = profile.attrs.clone();
        let domains: Vec<Vec<Value>> = attrs
            .iter()
            .map(|&a| profile.domain(a, problem.is_extended()))
            .collect();
        if domains.iter().any(|d| d.len() >= u8::MAX as usize) {
            return Err(Error::SizeCap {
                what: "attribute domain",
                cap: u8::MAX as usize - 1,
            });
        }
        let rules = system
            .rules()
            .iter()
            .map(|r| {
                r.lhs()
                    .iter()
                    .map(|&(a, v)| {
                        let p = attrs.binary_search(&a).expect("rule attribute in A(S)");
                        let j = domains[p]
                            .iter()
                            .position(|&x| x == Value::Num(v))
                            .expect("rule value in V_S");
                        (p, j as u8 + 1)
                    })
                    .collect()
            })
            .collect();
        Ok(Encoded {
            system,
            attrs,
            domains,
            rules,
            semantics: problem.semantics(),
        })
    }

    fn label(&self, state: &[u8]) -> Option<BTreeSet<usize>> {
        decide(
            self.system,
            self.semantics,
            |i| self.rules[i].iter().all(|&(p, c)| state[p] == c),
            |i| {
                self.rules[i]
                    .iter()
                    .any(|&(p, c)| state[p] != 0 && state[p] != c)
            },
        )
    }

    fn assignment(&self, state: &[u8]) -> Assignment {
        state
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(p, &c)| (self.attrs[p], self.domains[p][c as usize - 1]))
            .collect()
    }
}

struct Search<'a> {
    enc: Encoded<'a>,
    /// State to `(h, position of the chosen attribute)`; terminals store `u8::MAX`.
    memo: HashMap<Box<[u8]>, (u8, u8)>,
    stats: SolveStats,
    limits: SolveLimits,
    start: Instant,
}

struct Abort;

impl Search<'_> {
    fn value(&mut self, state: &mut Vec<u8>) -> std::result::Result<u8, Abort> {
        if let Some(&(h, _)) = self.memo.get(state.as_slice()) {
            self.stats.memo_hits += 1;
            return Ok(h);
        }
        self.stats.states += 1;
        if self.stats.states > self.limits.max_states
            || (self.stats.states.is_multiple_of(1024)
                && self.start.elapsed() > self.limits.timeout)
        {
            return Err(Abort);
        }
        if self.enc.label(state).is_some() {
            self.memo.insert(state.clone().into(), (0, u8::MAX));
            return Ok(0);
        }
        let unqueried = state.iter().filter(|&&c| c == 0).count() as u8;
        // Querying everything always ends in a terminal, so `unqueried` is
        // attainable; `best` starts one above so the first attribute is
        // evaluated in full.
        let mut best = unqueried + 1;
        let mut best_attr = u8::MAX;
        for p in 0..state.len() {
            if state[p] != 0 {
                continue;
            }
            let mut worst = 0u8;
            for c in 1..=self.enc.domains[p].len() as u8 {
                state[p] = c;
                let h = self.value(state);
                state[p] = 0;
                worst = worst.max(h?);
                if worst + 1 >= best {
                    break;
                }
            }
            if worst + 1 < best {
                best = worst + 1;
                best_attr = p as u8;
                if best == 1 {
                    break;
                }
            }
        }
        self.memo.insert(state.clone().into(), (best, best_attr));
        Ok(best)
    }

    fn build(&self, state: &mut Vec<u8>) -> Node {
        let (_, p) = self.memo[state.as_slice()];
        if p == u8::MAX {
            return Node::Terminal {
                rules: self.enc.label(state).expect("memoized terminal"),
            };
        }
        let p = p as usize;
        let mut edges = Vec::with_capacity(self.enc.domains[p].len());
        for (j, &v) in self.enc.domains[p].iter().enumerate() {
            state[p] = j as u8 + 1;
            edges.push((v, self.build(state)));
            state[p] = 0;
        }
        Node::working(self.enc.attrs[p], edges)
    }
}

/// `h_C(S)` together with a tree attaining it.
///
/// Among optimal first queries the lowest attribute index wins; edges are
/// listed in ascending value order with `*` last.
pub fn min_depth(
    system: &RuleSystem,
    problem: ProblemKind,
    limits: SolveLimits,
) -> Result<SolveResult> {
    let start = Instant::now();
    if system.n() == 0 {
        return Ok(SolveResult {
            depth: 0,
            tree: DecisionTree::new(
                problem.variant(),
                Node::Terminal {
                    rules: trivial_label(system, problem.semantics()),
                },
            ),
            stats: SolveStats {
                states: 1,
                memo_hits: 0,
                elapsed: start.elapsed(),
            },
        });
    }
    let enc = Encoded::new(system, problem)?;
    let n = enc.attrs.len();
    let mut search = Search {
        enc,
        memo: HashMap::new(),
        stats: SolveStats::default(),
        limits,
        start,
    };
    let mut state = vec![0u8; n];
    let depth = match search.value(&mut state) {
        Ok(h) => h as usize,
        Err(Abort) => {
            let states = search.stats.states;
            log::warn!("search stopped after {states} states");
            let upper = system.n();
            return Err(Error::CapExceeded {
                states,
                lower: lower_bound(system, problem).min(upper),
                upper,
            });
        }
    };
    let tree = DecisionTree::new(problem.variant(), search.build(&mut state));
    search.stats.elapsed = start.elapsed();
    log::debug!(
        "{problem}: h={depth} after {} states, {} memo hits",
        search.stats.states,
        search.stats.memo_hits
    );
    Ok(SolveResult {
        depth,
        tree,
        stats: search.stats,
    })
}

/// Cheap lower bounds on `h_C(S)` from node covers and rule lengths.
pub fn lower_bound(system: &RuleSystem, problem: ProblemKind) -> usize {
    let beta = |s: &RuleSystem| node_cover_number(s).unwrap_or(0);
    match problem {
        ProblemKind::AR | ProblemKind::EAR => beta(system).max(system.d()),
        ProblemKind::ESR => {
            let d = if system.is_reduced(Mode::Sr) {
                system.d()
            } else {
                0
            };
            beta(&system.core_subsystem(Mode::Sr)).max(d)
        }
        ProblemKind::EAD => {
            let d = if system.is_reduced(Mode::Ad) {
                system.d()
            } else {
                0
            };
            beta(&system.core_subsystem(Mode::Ad)).max(d)
        }
        ProblemKind::SR | ProblemKind::AD => match system.is_complete() {
            Ok(false) => beta(system),
            _ => 0,
        },
    }
}

/// The tree that queries attributes in index order until a label exists.
/// Its depth is at most `n(S)`.
pub fn sequential_tree(system: &RuleSystem, problem: ProblemKind) -> Result<DecisionTree> {
    if system.n() == 0 {
        return Ok(DecisionTree::new(
            problem.variant(),
            Node::Terminal {
                rules: trivial_label(system, problem.semantics()),
            },
        ));
    }
    let enc = Encoded::new(system, problem)?;
    let mut state = vec![0u8; enc.attrs.len()];
    Ok(DecisionTree::new(
        problem.variant(),
        sequential_node(&enc, &mut state, 0),
    ))
}

fn sequential_node(enc: &Encoded, state: &mut Vec<u8>, next: usize) -> Node {
    if let Some(rules) = enc.label(state) {
        return Node::Terminal { rules };
    }
    let edges: Vec<(Value, Node)> = (0..enc.domains[next].len())
        .map(|j| {
            state[next] = j as u8 + 1;
            let child = sequential_node(enc, state, next + 1);
            state[next] = 0;
            (enc.domains[next][j], child)
        })
        .collect();
    Node::working(enc.attrs[next], edges)
}

/// Assignment view of a solver state, for diagnostics.
#[doc(hidden)]
pub fn state_assignment(
    system: &RuleSystem,
    problem: ProblemKind,
    codes: &[u8],
) -> Result<Assignment> {
    Ok(Encoded::new(system, problem)?.assignment(codes))
}
