//! Cross-checks of the solver, the generators and the depth bounds.
//!
//! Four sections: hand-checked samples, witness families, depth
//! inequalities on random systems, and an optional exhaustive scan of every
//! system over two binary attributes with decisions `{0,1}`. Every failure
//! carries the system text, the tree (when one is involved) and the
//! inequality that broke, enough to replay it through the CLI.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{ceil_root_ratio, class_bounds, BoundQuery, Extremum};
use crate::cover::node_cover_number;
use crate::dsl::{parse_system, to_dsl};
use crate::fixtures;
use crate::generators::{gen_family, random_system, Family, FamilySpec, RandomConstraints};
use crate::rule::{AttrId, DecisionRule, Value};
use crate::solver::{min_depth, terminal_label, SolveLimits};
use crate::surgery::{lift_from_reduced, project_o, restrict_tree};
use crate::system::{Mode, Restriction, RuleSystem};
use crate::tree::{DecisionTree, ProblemKind, Semantics};
use crate::tree_io::tree_to_json;
use crate::verify::{label_violation, verify};
use crate::Assignment;

/// Largest `n` for the constructive upper-bound families.
pub const CONSTRUCTIVE_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditConfig {
    pub max_n: usize,
    pub max_k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Problems whose per-problem checks run. The cross-problem checks
    /// always solve all six.
    pub problems: Vec<ProblemKind>,
    pub exhaustive_tiny: bool,
    /// Fault injection: empty every terminal of the generators' certified
    /// trees before they are checked.
    pub corrupt_certified_trees: bool,
    pub limits: SolveLimits,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            max_n: 5,
            max_k: 3,
            trials: 200,
            seed: 0,
            problems: ProblemKind::ALL.to_vec(),
            exhaustive_tiny: false,
            corrupt_certified_trees: false,
            limits: SolveLimits::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

/// A failed check with what it takes to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub check: String,
    /// System in rule syntax.
    pub system: String,
    /// Tree file contents, when a tree is involved.
    pub tree: Option<String>,
    /// The violated statement.
    pub detail: String,
}

impl Failure {
    fn new(
        check: &str,
        system: &RuleSystem,
        tree: Option<&DecisionTree>,
        detail: impl Into<String>,
    ) -> Self {
        Failure {
            check: check.to_string(),
            system: to_dsl(system),
            tree: tree.map(|t| tree_to_json(t, system)),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FAIL {}: {}", self.check, self.detail)?;
        writeln!(f, "--- system")?;
        write!(f, "{}", self.system)?;
        if !self.system.ends_with('\n') {
            writeln!(f)?;
        }
        if let Some(tree) = &self.tree {
            writeln!(f, "--- tree")?;
            writeln!(f, "{tree}")?;
        }
        Ok(())
    }
}

/// Observed depths over one `(n, d, k)` class of the exhaustive scan.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassSpan {
    pub systems: usize,
    /// `(min, max)` of `h_C(S)` per problem.
    pub depths: BTreeMap<ProblemKind, (usize, usize)>,
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub tallies: BTreeMap<String, Tally>,
    pub failures: Vec<Failure>,
    /// Filled by the exhaustive scan.
    pub classes: BTreeMap<(usize, usize, usize), ClassSpan>,
    pub elapsed: Duration,
}

impl AuditReport {
    pub fn passed(&self) -> usize {
        self.tallies.values().map(|t| t.passed).sum()
    }

    pub fn failed(&self) -> usize {
        self.tallies.values().map(|t| t.failed).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.failed() == 0
    }

    fn absorb(&mut self, log: Log) {
        for (check, failure) in log.entries {
            let tally = self.tallies.entry(check).or_default();
            match failure {
                None => tally.passed += 1,
                Some(f) => {
                    tally.failed += 1;
                    self.failures.push(f);
                }
            }
        }
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.tallies.keys().map(String::len).max().unwrap_or(0);
        for (check, t) in &self.tallies {
            writeln!(
                f,
                "{check:<width$}  {:>7} passed  {:>4} failed",
                t.passed, t.failed
            )?;
        }
        for ((n, d, k), span) in &self.classes {
            let spans: Vec<String> = span
                .depths
                .iter()
                .map(|(p, (lo, hi))| format!("{p}={lo}..{hi}"))
                .collect();
            writeln!(
                f,
                "class n={n} d={d} k={k}: {} systems, {}",
                span.systems,
                spans.join(" ")
            )?;
        }
        for failure in &self.failures {
            write!(f, "\n{failure}")?;
        }
        writeln!(
            f,
            "\n{} checks passed, {} failed in {:.1?}",
            self.passed(),
            self.failed(),
            self.elapsed
        )
    }
}

/// Check outcomes in the order they were made.
#[derive(Default)]
struct Log {
    entries: Vec<(String, Option<Failure>)>,
}

impl Log {
    fn pass(&mut self, check: &str) {
        self.entries.push((check.to_string(), None));
    }

    fn fail(&mut self, failure: Failure) {
        self.entries.push((failure.check.clone(), Some(failure)));
    }

    fn check(&mut self, check: &str, ok: bool, failure: impl FnOnce() -> Failure) {
        if ok {
            self.pass(check);
        } else {
            self.fail(failure());
        }
    }

    fn merge(mut self, other: Log) -> Log {
        self.entries.extend(other.entries);
        self
    }
}

pub fn run_audit(config: &AuditConfig) -> AuditReport {
    let start = Instant::now();
    let mut report = AuditReport::default();
    report.absorb(regression_checks());
    report.absorb(family_checks(config));
    report.absorb(random_checks(config));
    if config.exhaustive_tiny {
        let (log, classes) = tiny_scan(config);
        report.absorb(log);
        report.classes = classes;
    }
    report.elapsed = start.elapsed();
    report
}

/// Depths of all six problems, in [`ProblemKind::ALL`] order, with the trees.
struct Solved {
    depth: [usize; 6],
    trees: Vec<DecisionTree>,
}

impl Solved {
    fn h(&self, p: ProblemKind) -> usize {
        self.depth[slot(p)]
    }

    fn tree(&self, p: ProblemKind) -> &DecisionTree {
        &self.trees[slot(p)]
    }
}

fn slot(p: ProblemKind) -> usize {
    ProblemKind::ALL
        .iter()
        .position(|&q| q == p)
        .expect("listed problem")
}

fn solve_all(
    system: &RuleSystem,
    limits: SolveLimits,
    check: &str,
    log: &mut Log,
) -> Option<Solved> {
    let mut depth = [0; 6];
    let mut trees = Vec::with_capacity(6);
    for (i, p) in ProblemKind::ALL.into_iter().enumerate() {
        match min_depth(system, p, limits) {
            Ok(r) => {
                depth[i] = r.depth;
                trees.push(r.tree);
            }
            Err(e) => {
                log.fail(Failure::new(
                    check,
                    system,
                    None,
                    format!("solving {p}: {e}"),
                ));
                return None;
            }
        }
    }
    Some(Solved { depth, trees })
}

fn solves(tree: &DecisionTree, system: &RuleSystem, p: ProblemKind) -> Result<(), String> {
    match verify(tree, system, p) {
        Ok(v) => match v.counterexample() {
            None => Ok(()),
            Some(c) => Err(format!("tree does not solve {p}: {c}")),
        },
        Err(e) => Err(format!("tree rejected for {p}: {e}")),
    }
}

fn sys(text: &str) -> RuleSystem {
    parse_system(text).expect("audit sample parses")
}

// ---------------------------------------------------------------- samples

fn regression_checks() -> Log {
    let mut log = Log::default();

    let s = fixtures::profile_sample();
    let p = s.profile();
    let expected: BTreeSet<u64> = [3, 4, 5].into();
    log.check(
        "samples/profile",
        p.params() == (4, 3, 3) && p.decisions == expected,
        || {
            Failure::new(
                "samples/profile",
                &s,
                None,
                format!(
                    "profile {:?} D={:?}, expected (4, 3, 3) D={{3,4,5}}",
                    p.params(),
                    p.decisions
                ),
            )
        },
    );

    let (s, t) = fixtures::realizability_sample();
    let real = |i: usize| s.is_realizable(s.rule(i), &t).unwrap_or(false);
    log.check("samples/realizability", real(0) && !real(1), || {
        Failure::new(
            "samples/realizability",
            &s,
            None,
            "expected r1 realizable and r2 not at (0,0,0)",
        )
    });

    let (s, t) = fixtures::nested_sample();
    let all: BTreeSet<usize> = [0, 1, 2].into();
    let ar = terminal_label(&s, &t, ProblemKind::AR).ok().flatten();
    let ok = ar.as_ref() == Some(&all)
        && label_violation(&s, &t, &[1, 2].into(), Semantics::AllDecisions).is_none()
        && label_violation(&s, &t, &[2].into(), Semantics::SomeRules).is_none()
        && label_violation(&s, &t, &[0].into(), Semantics::AllDecisions).is_some()
        && terminal_label(&s, &t, ProblemKind::AD)
            .ok()
            .flatten()
            .is_some()
        && terminal_label(&s, &t, ProblemKind::SR)
            .ok()
            .flatten()
            .is_some();
    log.check("samples/terminal labels", ok, || {
        Failure::new(
            "samples/terminal labels",
            &s,
            None,
            format!(
                "at (0,0,0): AR label {ar:?}; expected all rules, AD {{r2,r3}}, SR {{r3}} accepted"
            ),
        )
    });

    let cases = [
        (
            fixtures::branching_sample(),
            fixtures::branching_o_tree(),
            ProblemKind::AR,
        ),
        (
            fixtures::branching_sample(),
            fixtures::branching_e_tree(),
            ProblemKind::EAR,
        ),
        (
            fixtures::mixed_decisions_sample(),
            fixtures::mixed_ar_tree(),
            ProblemKind::AR,
        ),
        (
            fixtures::mixed_decisions_sample(),
            fixtures::mixed_ad_tree(),
            ProblemKind::AD,
        ),
        (
            fixtures::mixed_decisions_sample(),
            fixtures::mixed_sr_tree(),
            ProblemKind::SR,
        ),
        (
            fixtures::triangle_sample(),
            fixtures::triangle_ar_tree(),
            ProblemKind::AR,
        ),
    ];
    for (s, t, p) in &cases {
        match solves(t, s, *p) {
            Ok(()) => log.pass("samples/trees"),
            Err(e) => log.fail(Failure::new("samples/trees", s, Some(t), e)),
        }
    }

    let s = fixtures::reduction_sample();
    let ad = s.reduce(Mode::Ad);
    let sr = s.reduce(Mode::Sr);
    log.check(
        "samples/reduction",
        ad == sys("a1=0 & a2=0 -> 0\na1=0 -> 1") && sr == sys("a1=0 -> 1"),
        || {
            Failure::new(
                "samples/reduction",
                &s,
                None,
                format!("AD-reduced:\n{}SR-reduced:\n{}", to_dsl(&ad), to_dsl(&sr)),
            )
        },
    );

    let s = fixtures::triangle_sample();
    match restrict_tree(
        &fixtures::triangle_ar_tree(),
        &fixtures::triangle_alpha(),
        &s,
    ) {
        Ok(out) => {
            let ok = out.system == sys("a1=0 & a2=0 -> 0\na1=1 -> 0")
                && out.pruned == fixtures::triangle_pruned_tree()
                && out.tree == fixtures::triangle_restricted_tree()
                && solves(&out.tree, &out.system, ProblemKind::AR).is_ok();
            log.check("samples/restriction", ok, || {
                Failure::new(
                    "samples/restriction",
                    &s,
                    Some(&out.tree),
                    "restricted tree differs from the expected one",
                )
            });
        }
        Err(e) => log.fail(Failure::new("samples/restriction", &s, None, e.to_string())),
    }
    let beta = node_cover_number(&s).ok();
    log.check("samples/node cover", beta == Some(2), || {
        Failure::new(
            "samples/node cover",
            &s,
            None,
            format!("β={beta:?}, expected 2"),
        )
    });

    let s = fixtures::core_sample();
    let core_sr = s.core_subsystem(Mode::Sr);
    let core_ad = s.core_subsystem(Mode::Ad);
    log.check(
        "samples/core subsystems",
        core_sr == sys("-> 1\n-> 2") && core_ad == sys("a1=0 -> 0\n-> 1\n-> 2"),
        || {
            Failure::new(
                "samples/core subsystems",
                &s,
                None,
                format!(
                    "SR core:\n{}AD core:\n{}",
                    to_dsl(&core_sr),
                    to_dsl(&core_ad)
                ),
            )
        },
    );

    let s = fixtures::incomplete_sample();
    let alpha: Assignment = [(AttrId(2), Value::Num(0))].into_iter().collect();
    let restricted = s.restrict(&alpha).ok().and_then(Restriction::into_system);
    log.check(
        "samples/incompleteness",
        s.is_complete().ok() == Some(false) && restricted == Some(sys("a1=0 -> 0\na1=1 -> 0")),
        || {
            Failure::new(
                "samples/incompleteness",
                &s,
                None,
                "expected incomplete, with S_{a2=0} = {a1=0 -> 0, a1=1 -> 0}",
            )
        },
    );
    log
}

// ---------------------------------------------------------------- families

fn certified(tree: &DecisionTree, corrupt: bool) -> DecisionTree {
    if !corrupt {
        return tree.clone();
    }
    let root = tree.root.map_terminals(&mut |_| BTreeSet::new());
    DecisionTree::new(tree.variant, root)
}

fn family_checks(config: &AuditConfig) -> Log {
    let mut specs = Vec::new();
    for n in 1..=config.max_n {
        for d in 1..=n {
            for k in 1..=config.max_k {
                specs.push((n, d, k));
            }
        }
    }
    let small = specs
        .par_iter()
        .map(|&(n, d, k)| small_family_checks(config, n, d, k))
        .collect::<Vec<_>>();
    let mut big = Vec::new();
    for n in 1..=CONSTRUCTIVE_MAX_N {
        for d in 1..=3.min(n) {
            for k in 1..=3 {
                big.push((n, d, k));
            }
        }
    }
    let constructive = big
        .par_iter()
        .map(|&(n, d, k)| constructive_checks(config, n, d, k))
        .collect::<Vec<_>>();
    small
        .into_iter()
        .chain(constructive)
        .fold(Log::default(), Log::merge)
}

fn generate(
    family: Family,
    n: usize,
    d: usize,
    k: usize,
    log: &mut Log,
) -> Option<crate::generators::Generated> {
    match gen_family(&FamilySpec::new(family, n, d, k)) {
        Ok(g) => Some(g),
        Err(e) => {
            let check = format!("families/{family} builds");
            log.fail(Failure {
                check,
                system: String::new(),
                tree: None,
                detail: format!("n={n} d={d} k={k}: {e}"),
            });
            None
        }
    }
}

fn check_certified(g: &crate::generators::Generated, family: Family, corrupt: bool, log: &mut Log) {
    let check = format!("families/{family} certified trees");
    for (p, tree) in &g.certified {
        let tree = certified(tree, corrupt);
        match solves(&tree, &g.system, *p) {
            Ok(()) => log.pass(&check),
            Err(e) => log.fail(Failure::new(&check, &g.system, Some(&tree), e)),
        }
    }
}

fn small_family_checks(config: &AuditConfig, n: usize, d: usize, k: usize) -> Log {
    let mut log = Log::default();
    let mut families = vec![Family::DistinctDecisions, Family::EmptyRule];
    if d == 1 {
        families.push(Family::UnitFan);
    }
    if k == 1 {
        families.push(Family::SlidingWindow);
    }
    if d >= 2 && k >= 2 {
        families.push(Family::Cyclic);
    }
    if d < n {
        families.push(Family::OneQuery);
    }
    if d == n && n <= 4 {
        families.push(Family::ParamWitness);
    }
    for family in families {
        let Some(g) = generate(family, n, d, k, &mut log) else {
            continue;
        };
        let s = &g.system;
        let name = |what: &str| format!("families/{family} {what}");
        check_certified(&g, family, config.corrupt_certified_trees, &mut log);
        let Some(solved) = solve_all(s, config.limits, &name("solves"), &mut log) else {
            continue;
        };
        let at_most_n = ProblemKind::ALL.into_iter().all(|p| solved.h(p) <= s.n());
        log.check("families/depth at most n", at_most_n, || {
            Failure::new(
                "families/depth at most n",
                s,
                None,
                format!("depths {:?} exceed n={}", solved.depth, s.n()),
            )
        });
        let expect = |log: &mut Log, what: &str, p: ProblemKind, ok: bool, statement: String| {
            let check = name(what);
            log.check(&check, ok, || {
                Failure::new(
                    &check,
                    s,
                    Some(solved.tree(p)),
                    format!("n={n} d={d} k={k}: {statement}"),
                )
            });
        };
        let sr = solved.h(ProblemKind::SR);
        let ad = solved.h(ProblemKind::AD);
        match family {
            Family::UnitFan => expect(
                &mut log,
                "SR depth",
                ProblemKind::SR,
                sr == 1,
                format!("h_SR={sr}, expected 1"),
            ),
            Family::SlidingWindow => expect(
                &mut log,
                "SR depth",
                ProblemKind::SR,
                sr == d,
                format!("h_SR={sr}, expected d={d}"),
            ),
            Family::Cyclic => expect(
                &mut log,
                "SR depth",
                ProblemKind::SR,
                sr == n,
                format!("h_SR={sr}, expected n={n}"),
            ),
            Family::DistinctDecisions => {
                let esr = solved.h(ProblemKind::ESR);
                expect(
                    &mut log,
                    "AD depth",
                    ProblemKind::AD,
                    ad >= n,
                    format!("h_AD={ad} < n={n}"),
                );
                expect(
                    &mut log,
                    "ESR depth",
                    ProblemKind::ESR,
                    esr >= n,
                    format!("h_ESR={esr} < n={n}"),
                );
            }
            Family::EmptyRule => {
                for p in [
                    ProblemKind::SR,
                    ProblemKind::AD,
                    ProblemKind::ESR,
                    ProblemKind::EAD,
                ] {
                    let h = solved.h(p);
                    expect(
                        &mut log,
                        "zero depth",
                        p,
                        h == 0,
                        format!("h_{p}={h}, expected 0"),
                    );
                }
            }
            Family::OneQuery => {
                let reduced = s.is_reduced(Mode::Sr) && s.is_reduced(Mode::Ad);
                expect(
                    &mut log,
                    "reduced",
                    ProblemKind::SR,
                    reduced,
                    "system is not reduced".into(),
                );
                expect(
                    &mut log,
                    "SR depth",
                    ProblemKind::SR,
                    sr == 1,
                    format!("h_SR={sr}, expected 1"),
                );
                expect(
                    &mut log,
                    "AD depth",
                    ProblemKind::AD,
                    ad == 1,
                    format!("h_AD={ad}, expected 1"),
                );
            }
            Family::ParamWitness => {
                let reduced = s.is_reduced(Mode::Sr) && s.is_reduced(Mode::Ad);
                expect(
                    &mut log,
                    "reduced",
                    ProblemKind::SR,
                    reduced,
                    "system is not reduced".into(),
                );
                expect(
                    &mut log,
                    "SR depth",
                    ProblemKind::SR,
                    sr == n,
                    format!("h_SR={sr}, expected n={n}"),
                );
                expect(
                    &mut log,
                    "AD depth",
                    ProblemKind::AD,
                    ad == n,
                    format!("h_AD={ad}, expected n={n}"),
                );
            }
            _ => {}
        }
    }
    log
}

fn constructive_checks(config: &AuditConfig, n: usize, d: usize, k: usize) -> Log {
    let mut log = Log::default();
    if (2..=3).contains(&d) && k >= 2 {
        if let Some(g) = generate(Family::BlockEar, n, d, k, &mut log) {
            check_certified(
                &g,
                Family::BlockEar,
                config.corrupt_certified_trees,
                &mut log,
            );
            if let Some(tree) = g.tree_for(ProblemKind::EAR) {
                // depth <= d + n/k^(d-1), cleared of the fraction
                let scale = k.pow(d as u32 - 1);
                let depth = tree.depth();
                let check = "families/block_ear depth bound";
                log.check(check, depth * scale <= d * scale + n, || {
                    Failure::new(
                        check,
                        &g.system,
                        Some(tree),
                        format!("depth {depth} > {d} + {n}/{scale}"),
                    )
                });
            }
        }
    }
    if let Some(g) = generate(Family::RecursiveEsr, n, d, k, &mut log) {
        check_certified(
            &g,
            Family::RecursiveEsr,
            config.corrupt_certified_trees,
            &mut log,
        );
        let check = "families/recursive_esr reduced";
        log.check(check, g.system.is_reduced(Mode::Sr), || {
            Failure::new(check, &g.system, None, "system is not SR-reduced")
        });
        if let Some(tree) = g.tree_for(ProblemKind::ESR) {
            let bound = 2 * d * ceil_root_ratio(n, d, k);
            let depth = tree.depth();
            let check = "families/recursive_esr depth bound";
            log.check(check, depth <= bound, || {
                Failure::new(
                    check,
                    &g.system,
                    Some(tree),
                    format!("depth {depth} > 2d*ceil((nk)^(1/d)/k) = {bound}"),
                )
            });
        }
    }
    log
}

// ---------------------------------------------------------------- random systems

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn random_checks(config: &AuditConfig) -> Log {
    (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let n = rng.random_range(1..=config.max_n.max(1));
            let d = rng.random_range(1..=n);
            let k = rng.random_range(1..=config.max_k.max(1));
            let constraints = RandomConstraints {
                sr_reduced: trial % 4 == 1,
                ad_reduced: trial % 4 == 2,
                ..RandomConstraints::default()
            };
            let mut log = Log::default();
            match random_system(n, d, k, rng.random(), &constraints) {
                Ok(s) => system_checks(config, &s, &mut rng, &mut log),
                Err(e) => log.fail(Failure {
                    check: "random/generation".into(),
                    system: String::new(),
                    tree: None,
                    detail: format!("n={n} d={d} k={k}: {e}"),
                }),
            }
            log
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Log::default(), Log::merge)
}

fn random_alpha(system: &RuleSystem, extended: bool, rng: &mut ChaCha8Rng) -> Assignment {
    let profile = system.profile();
    let mut alpha = Assignment::new();
    for &a in &profile.attrs {
        if rng.random_bool(0.4) {
            let dom = profile.domain(a, extended);
            let v = *dom.choose(rng).expect("attributes have values");
            alpha.insert(a, v).expect("fresh attribute");
        }
    }
    alpha
}

/// The depth inequalities for one system.
fn system_checks(config: &AuditConfig, s: &RuleSystem, rng: &mut ChaCha8Rng, log: &mut Log) {
    use ProblemKind::*;
    let Some(solved) = solve_all(s, config.limits, "random/solves", log) else {
        return;
    };
    let h = |p| solved.h(p);
    let n = s.n();
    let fail = |check: &str, tree: Option<&DecisionTree>, detail: String| {
        Failure::new(check, s, tree, detail)
    };

    for &p in &config.problems {
        let tree = solved.tree(p);
        let check = "random/solver tree";
        match solves(tree, s, p) {
            Ok(()) if tree.depth() == h(p) => log.pass(check),
            Ok(()) => log.fail(fail(
                check,
                Some(tree),
                format!("{p}: tree depth {} but h={}", tree.depth(), h(p)),
            )),
            Err(e) => log.fail(fail(check, Some(tree), e)),
        }
    }

    let chains = [
        (SR, AD, "h_SR <= h_AD"),
        (AD, AR, "h_AD <= h_AR"),
        (ESR, EAD, "h_ESR <= h_EAD"),
        (EAD, EAR, "h_EAD <= h_EAR"),
        (SR, ESR, "h_SR <= h_ESR"),
        (AD, EAD, "h_AD <= h_EAD"),
        (AR, EAR, "h_AR <= h_EAR"),
    ];
    for (a, b, statement) in chains {
        log.check("random/problem ordering", h(a) <= h(b), || {
            fail(
                "random/problem ordering",
                None,
                format!("{statement} fails: {} > {}", h(a), h(b)),
            )
        });
    }
    log.check("random/problem ordering", h(EAR) <= n, || {
        fail(
            "random/problem ordering",
            None,
            format!("h_EAR={} > n={n}", h(EAR)),
        )
    });

    let beta = |sys: &RuleSystem| node_cover_number(sys).unwrap_or(0);
    let b = beta(s);
    let mut cover_checks = vec![
        (AR, b, "β(S)"),
        (EAR, b, "β(S)"),
        (ESR, beta(&s.core_subsystem(Mode::Sr)), "β of the SR core"),
        (EAD, beta(&s.core_subsystem(Mode::Ad)), "β of the AD core"),
    ];
    if s.is_complete().ok() == Some(false) {
        cover_checks.push((SR, b, "β(S) for an incomplete system"));
        cover_checks.push((AD, b, "β(S) for an incomplete system"));
    }
    for (p, bound, what) in cover_checks {
        log.check("random/node cover bound", h(p) >= bound, || {
            fail(
                "random/node cover bound",
                Some(solved.tree(p)),
                format!("h_{p}={} < {what}={bound}", h(p)),
            )
        });
    }

    let d = s.d();
    let mut length_checks = vec![(AR, "")];
    if s.is_reduced(Mode::Sr) {
        length_checks.push((ESR, " (SR-reduced)"));
    }
    if s.is_reduced(Mode::Ad) {
        length_checks.push((EAD, " (AD-reduced)"));
    }
    for (p, note) in length_checks {
        log.check("random/rule length bound", h(p) >= d, || {
            fail(
                "random/rule length bound",
                Some(solved.tree(p)),
                format!("h_{p}={} < d={d}{note}", h(p)),
            )
        });
    }

    for (p, mode) in [(ESR, Mode::Sr), (EAD, Mode::Ad)] {
        let reduced = s.reduce(mode);
        let r = match min_depth(&reduced, p, config.limits) {
            Ok(r) => r,
            Err(e) => {
                log.fail(fail("random/reduction invariance", None, e.to_string()));
                continue;
            }
        };
        log.check("random/reduction invariance", r.depth == h(p), || {
            fail(
                "random/reduction invariance",
                None,
                format!("h_{p}(S)={} but h_{p}(reduced)={}", h(p), r.depth),
            )
        });
        match lift_from_reduced(&r.tree, s, mode) {
            Ok(lifted) => {
                let ok = solves(&lifted, s, p);
                log.check(
                    "surgery/lift",
                    ok.is_ok() && lifted.depth() == r.depth,
                    || {
                        let why = ok.err().unwrap_or_else(|| {
                            format!("depth {} became {}", r.depth, lifted.depth())
                        });
                        fail("surgery/lift", Some(&lifted), why)
                    },
                )
            }
            Err(e) => log.fail(fail("surgery/lift", None, e.to_string())),
        }
    }

    for &p in &config.problems {
        let alpha = random_alpha(s, p.is_extended(), rng);
        let restricted = match s.restrict(&alpha) {
            Ok(Restriction::Rules { system, .. }) => system,
            Ok(Restriction::Empty) => continue,
            Err(e) => {
                log.fail(fail(
                    "random/restriction monotone",
                    None,
                    format!("α={alpha}: {e}"),
                ));
                continue;
            }
        };
        match min_depth(&restricted, p, config.limits) {
            Ok(r) => log.check("random/restriction monotone", r.depth <= h(p), || {
                fail(
                    "random/restriction monotone",
                    None,
                    format!("α={alpha}: h_{p}(S_α)={} > h_{p}(S)={}", r.depth, h(p)),
                )
            }),
            Err(e) => log.fail(fail("random/restriction monotone", None, e.to_string())),
        }
        if n > 0 {
            match restrict_tree(solved.tree(p), &alpha, s) {
                Ok(out) => {
                    let ok = solves(&out.tree, &out.system, p);
                    log.check("surgery/restrict", ok.is_ok(), || {
                        fail(
                            "surgery/restrict",
                            Some(solved.tree(p)),
                            format!("α={alpha}: {}", ok.unwrap_err()),
                        )
                    })
                }
                Err(e) => log.fail(fail(
                    "surgery/restrict",
                    Some(solved.tree(p)),
                    format!("α={alpha}: {e}"),
                )),
            }
        }
        if p.is_extended() {
            let o = project_o(solved.tree(p));
            let ok = solves(&o, s, p.plain());
            log.check("surgery/project", ok.is_ok(), || {
                fail("surgery/project", Some(solved.tree(p)), ok.unwrap_err())
            });
        }
    }

    let keep: Vec<usize> = (0..s.len()).filter(|_| rng.random_bool(0.5)).collect();
    if !keep.is_empty() {
        let sub = s.subsystem(keep).expect("nonempty subset");
        match min_depth(&sub, AR, config.limits) {
            Ok(r) => log.check("random/subsystem monotone", r.depth <= h(AR), || {
                fail(
                    "random/subsystem monotone",
                    None,
                    format!(
                        "h_AR(S')={} > h_AR(S)={} for S' =\n{}",
                        r.depth,
                        h(AR),
                        to_dsl(&sub)
                    ),
                )
            }),
            Err(e) => log.fail(fail("random/subsystem monotone", None, e.to_string())),
        }
    }

    class_bound_checks(s, &solved, &config.problems, "random/class bounds", log);
}

/// `h_C(S)` lies between the class minimum's lower end and the class
/// maximum, for the plain class and, when `S` is reduced, the reduced one.
fn class_bound_checks(
    s: &RuleSystem,
    solved: &Solved,
    problems: &[ProblemKind],
    check: &str,
    log: &mut Log,
) {
    let (n, d, k) = s.profile().params();
    if n == 0 {
        return;
    }
    for &p in problems {
        let h = solved.h(p);
        let mut classes = vec![false];
        let reducible = !matches!(p, ProblemKind::AR | ProblemKind::EAR);
        let mode = if p.semantics() == Semantics::AllDecisions {
            Mode::Ad
        } else {
            Mode::Sr
        };
        if reducible && s.is_reduced(mode) {
            classes.push(true);
        }
        for reduced in classes {
            let q = |extremum| BoundQuery {
                problem: p,
                reduced,
                extremum,
                n,
                d,
                k,
            };
            let (min, max) = match (
                class_bounds(&q(Extremum::Min)),
                class_bounds(&q(Extremum::Max)),
            ) {
                (Ok(min), Ok(max)) => (min, max),
                (Err(e), _) | (_, Err(e)) => {
                    log.fail(Failure::new(check, s, None, e.to_string()));
                    continue;
                }
            };
            let ok = min.admits_as_lower(h) && BigRational::from_integer(h.into()) <= max.upper;
            let class = if reduced { "reduced " } else { "" };
            log.check(check, ok, || {
                Failure::new(
                    check,
                    s,
                    Some(solved.tree(p)),
                    format!(
                        "h_{p}={h} outside the {class}class ({n},{d},{k}): min {min}; max {max}"
                    ),
                )
            });
        }
    }
}

// ---------------------------------------------------------------- exhaustive scan

/// The 18 rules over `a1, a2` with values and decisions in `{0, 1}`.
pub fn tiny_candidates() -> Vec<DecisionRule> {
    let mut lhs: Vec<Vec<(u32, u64)>> = vec![vec![]];
    for a in 1..=2 {
        for v in 0..2 {
            lhs.push(vec![(a, v)]);
        }
    }
    for v in 0..2 {
        for w in 0..2 {
            lhs.push(vec![(1, v), (2, w)]);
        }
    }
    lhs.iter()
        .flat_map(|l| (0..2).map(move |rhs| DecisionRule::from_pairs(l, rhs)))
        .collect()
}

type ScanRow = ((usize, usize, usize), [usize; 6]);

fn tiny_scan(config: &AuditConfig) -> (Log, BTreeMap<(usize, usize, usize), ClassSpan>) {
    let candidates = tiny_candidates();
    let total = 1u32 << candidates.len();
    let (rows, log): (Vec<Option<ScanRow>>, Vec<Log>) = (1..total)
        .into_par_iter()
        .map(|mask| {
            let mut log = Log::default();
            let rules = (0..candidates.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| candidates[i].clone());
            let s = RuleSystem::new(rules).expect("nonempty subset");
            if s.n() != 2 {
                return (None, log);
            }
            let Some(solved) = solve_all(&s, config.limits, "tiny/solves", &mut log) else {
                return (None, log);
            };
            class_bound_checks(
                &s,
                &solved,
                &ProblemKind::ALL,
                "tiny/class bounds",
                &mut log,
            );
            (Some((s.profile().params(), solved.depth)), log)
        })
        .unzip();
    let mut log = log.into_iter().fold(Log::default(), Log::merge);

    let mut classes: BTreeMap<(usize, usize, usize), ClassSpan> = BTreeMap::new();
    for (params, depth) in rows.into_iter().flatten() {
        let span = classes.entry(params).or_default();
        span.systems += 1;
        for (i, p) in ProblemKind::ALL.into_iter().enumerate() {
            let e = span.depths.entry(p).or_insert((depth[i], depth[i]));
            e.0 = e.0.min(depth[i]);
            e.1 = e.1.max(depth[i]);
        }
    }

    // Attainment of the exact class values. Maxima of AD and EAD depend on
    // having many decisions, which the scan does not offer.
    for (&(n, d, k), span) in &classes {
        for (&p, &(lo, hi)) in &span.depths {
            for (extremum, observed) in [(Extremum::Min, lo), (Extremum::Max, hi)] {
                if extremum == Extremum::Max && matches!(p, ProblemKind::AD | ProblemKind::EAD) {
                    continue;
                }
                let q = BoundQuery {
                    problem: p,
                    reduced: false,
                    extremum,
                    n,
                    d,
                    k,
                };
                let Ok(b) = class_bounds(&q) else { continue };
                if !b.exact {
                    continue;
                }
                let check = "tiny/class extremes attained";
                log.check(check, b.contains(observed), || Failure {
                    check: check.into(),
                    system: String::new(),
                    tree: None,
                    detail: format!(
                        "class ({n},{d},{k}) {extremum:?} of h_{p} is {observed}, expected {b}"
                    ),
                });
            }
        }
    }
    (log, classes)
}
