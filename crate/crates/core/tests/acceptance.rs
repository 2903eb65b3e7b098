//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ruletree::audit::{run_audit, AuditConfig, AuditReport};
use ruletree::bounds::{ceil_root_ratio, class_bounds, BoundQuery, Extremum};
use ruletree::cover::node_cover_number;
use ruletree::dsl::parse_system;
use ruletree::fixtures;
use ruletree::generators::{gen_family, random_system, Family, FamilySpec, RandomConstraints};
use ruletree::solver::{min_depth, terminal_label, SolveLimits};
use ruletree::surgery::{lift_from_reduced, project_o, restrict_tree};
use ruletree::verify::{label_violation, verify};
use ruletree::{Assignment, DecisionTree, Mode, ProblemKind, RuleSystem, Semantics};

use common::Naive;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn h(s: &RuleSystem, p: ProblemKind) -> usize {
    min_depth(s, p, SolveLimits::default()).unwrap().depth
}

fn solves(t: &DecisionTree, s: &RuleSystem, p: ProblemKind) -> bool {
    verify(t, s, p).map(|v| v.is_solving()).unwrap_or(false)
}

fn gen(f: Family, n: usize, d: usize, k: usize) -> ruletree::generators::Generated {
    gen_family(&FamilySpec::new(f, n, d, k)).unwrap()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn worked_samples() -> Outcome {
    let s = fixtures::profile_sample();
    let p = s.profile();
    ensure(p.params() == (4, 3, 3), || {
        format!("profile {:?}", p.params())
    })?;
    ensure(p.decisions == BTreeSet::from([3, 4, 5]), || {
        format!("D={:?}", p.decisions)
    })?;

    let (s, t) = fixtures::realizability_sample();
    ensure(s.is_realizable(s.rule(0), &t).unwrap(), || {
        "r1 should be realizable".into()
    })?;
    ensure(!s.is_realizable(s.rule(1), &t).unwrap(), || {
        "r2 should not be realizable".into()
    })?;

    let (s, t) = fixtures::nested_sample();
    let ar = terminal_label(&s, &t, ProblemKind::AR).unwrap();
    ensure(ar == Some(BTreeSet::from([0, 1, 2])), || {
        format!("AR label {ar:?}")
    })?;
    for (tau, sem) in [
        (BTreeSet::from([1, 2]), Semantics::AllDecisions),
        (BTreeSet::from([2]), Semantics::SomeRules),
    ] {
        ensure(label_violation(&s, &t, &tau, sem).is_none(), || {
            format!("{tau:?} rejected for {sem:?}")
        })?;
    }
    for p in [ProblemKind::AD, ProblemKind::SR] {
        ensure(terminal_label(&s, &t, p).unwrap().is_some(), || {
            format!("no {p} label")
        })?;
    }

    let trees = [
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
    ];
    for (s, t, p) in &trees {
        ensure(solves(t, s, *p), || format!("fixture tree fails {p}"))?;
    }

    let s = fixtures::reduction_sample();
    ensure(
        s.reduce(Mode::Ad) == parse_system("a1=0 & a2=0 -> 0\na1=0 -> 1").unwrap(),
        || "AD reduction".into(),
    )?;
    ensure(
        s.reduce(Mode::Sr) == parse_system("a1=0 -> 1").unwrap(),
        || "SR reduction".into(),
    )?;

    let s = fixtures::triangle_sample();
    let out = restrict_tree(
        &fixtures::triangle_ar_tree(),
        &fixtures::triangle_alpha(),
        &s,
    )
    .unwrap();
    ensure(
        out.system == parse_system("a1=0 & a2=0 -> 0\na1=1 -> 0").unwrap(),
        || "S_α".into(),
    )?;
    ensure(out.pruned == fixtures::triangle_pruned_tree(), || {
        "pruned tree".into()
    })?;
    ensure(out.tree == fixtures::triangle_restricted_tree(), || {
        "restricted tree".into()
    })?;
    ensure(node_cover_number(&s).unwrap() == 2, || "β".into())?;

    let s = fixtures::core_sample();
    ensure(
        s.core_subsystem(Mode::Sr) == parse_system("-> 1\n-> 2").unwrap(),
        || "SR core".into(),
    )?;
    ensure(
        s.core_subsystem(Mode::Ad) == parse_system("a1=0 -> 0\n-> 1\n-> 2").unwrap(),
        || "AD core".into(),
    )?;
    Ok("profile, realizability, labels, 5 trees, reductions, restriction, β, cores".into())
}

fn solver_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let constraints = RandomConstraints {
        max_rules: Some(6),
        ..RandomConstraints::default()
    };
    let mut deepest = 0;
    for trial in 0..100 {
        let n = rng.random_range(1..=4);
        let d = rng.random_range(1..=n);
        let k = rng.random_range(1..=2);
        let s = random_system(n, d, k, rng.random(), &constraints).unwrap();
        for p in ProblemKind::ALL {
            let fast = h(&s, p);
            let slow = Naive::new(&s, p).min_depth();
            ensure(fast == slow, || {
                format!(
                    "trial {trial} {p}: solver {fast}, brute force {slow}\n{}",
                    ruletree::dsl::to_dsl(&s)
                )
            })?;
            deepest = deepest.max(fast);
        }
    }
    Ok(format!(
        "100 systems x 6 problems agree, depths up to {deepest}"
    ))
}

fn maximum_witnesses() -> Outcome {
    let mut systems = 0;
    for n in 1..=5 {
        for d in 1..=n {
            for k in 1..=3 {
                let mut witnesses = vec![];
                if d == 1 {
                    witnesses.push((Family::UnitFan, 1));
                }
                if k == 1 {
                    witnesses.push((Family::SlidingWindow, d));
                }
                if d >= 2 && k >= 2 {
                    witnesses.push((Family::Cyclic, n));
                }
                for (f, want) in witnesses {
                    let s = gen(f, n, d, k).system;
                    let got = h(&s, ProblemKind::SR);
                    ensure(got == want, || {
                        format!("{f}({n},{d},{k}): h_SR={got}, expected {want}")
                    })?;
                    for p in ProblemKind::ALL {
                        ensure(h(&s, p) <= n, || format!("{f}({n},{d},{k}): h_{p} > n"))?;
                    }
                    systems += 1;
                }
                let s = gen(Family::DistinctDecisions, n, d, k).system;
                for p in [ProblemKind::AD, ProblemKind::ESR] {
                    let got = h(&s, p);
                    ensure(got >= n, || {
                        format!("distinct_decisions({n},{d},{k}): h_{p}={got} < n")
                    })?;
                }
                for p in ProblemKind::ALL {
                    ensure(h(&s, p) <= n, || {
                        format!("distinct_decisions({n},{d},{k}): h_{p} > n")
                    })?;
                }
                systems += 1;
            }
        }
    }
    Ok(format!("{systems} witness systems"))
}

fn minimum_witnesses() -> Outcome {
    let mut systems = 0;
    for n in 1..=5 {
        for d in 1..=n {
            for k in 1..=3 {
                let s = gen(Family::EmptyRule, n, d, k).system;
                for p in [
                    ProblemKind::SR,
                    ProblemKind::AD,
                    ProblemKind::ESR,
                    ProblemKind::EAD,
                ] {
                    ensure(h(&s, p) == 0, || {
                        format!("empty_rule({n},{d},{k}): h_{p} != 0")
                    })?;
                }
                systems += 1;
                if d < n {
                    let s = gen(Family::OneQuery, n, d, k).system;
                    ensure(s.is_reduced(Mode::Sr) && s.is_reduced(Mode::Ad), || {
                        "one_query not reduced".into()
                    })?;
                    for p in [ProblemKind::SR, ProblemKind::AD] {
                        let got = h(&s, p);
                        ensure(got == 1, || format!("one_query({n},{d},{k}): h_{p}={got}"))?;
                    }
                    systems += 1;
                }
                if d == n && n <= 4 {
                    let s = gen(Family::ParamWitness, n, d, k).system;
                    ensure(s.is_reduced(Mode::Sr), || {
                        "param_witness not reduced".into()
                    })?;
                    let got = h(&s, ProblemKind::SR);
                    ensure(got == n, || {
                        format!("param_witness({n},{d},{k}): h_SR={got}")
                    })?;
                    systems += 1;
                }
            }
        }
    }
    Ok(format!("{systems} witness systems"))
}

fn constructive_bounds() -> Outcome {
    let mut trees = 0;
    for n in 1..=12 {
        for k in 1..=3usize {
            for d in 1..=3.min(n) {
                if d >= 2 && k >= 2 {
                    let g = gen(Family::BlockEar, n, d, k);
                    let t = g.tree_for(ProblemKind::EAR).unwrap();
                    ensure(solves(t, &g.system, ProblemKind::EAR), || {
                        format!("block_ear({n},{d},{k}) fails")
                    })?;
                    let scale = k.pow(d as u32 - 1);
                    ensure(t.depth() * scale <= d * scale + n, || {
                        format!("block_ear({n},{d},{k}): depth {}", t.depth())
                    })?;
                    trees += 1;
                }
                let g = gen(Family::RecursiveEsr, n, d, k);
                let t = g.tree_for(ProblemKind::ESR).unwrap();
                ensure(solves(t, &g.system, ProblemKind::ESR), || {
                    format!("recursive_esr({n},{d},{k}) fails")
                })?;
                let bound = 2 * d * ceil_root_ratio(n, d, k);
                ensure(t.depth() <= bound, || {
                    format!("recursive_esr({n},{d},{k}): depth {} > {bound}", t.depth())
                })?;
                trees += 1;
            }
        }
    }
    Ok(format!("{trees} trees verified within bounds"))
}

fn report_failures(report: &AuditReport) -> String {
    report
        .failures
        .iter()
        .take(3)
        .map(|f| f.to_string())
        .collect()
}

fn inequality_suite() -> Outcome {
    let config = AuditConfig {
        max_n: 5,
        max_k: 3,
        trials: 200,
        seed: 7,
        ..AuditConfig::default()
    };
    let report = run_audit(&config);
    ensure(report.is_clean(), || report_failures(&report))?;
    let random: usize = report
        .tallies
        .iter()
        .filter(|(name, _)| name.starts_with("random/"))
        .map(|(_, t)| t.passed)
        .sum();
    Ok(format!(
        "200 systems, {random} random-system checks, 0 violations"
    ))
}

fn random_alpha(s: &RuleSystem, extended: bool, rng: &mut ChaCha8Rng) -> Assignment {
    let mut alpha = Assignment::new();
    for &a in &s.profile().attrs {
        if rng.random_bool(0.5) {
            let dom = s.profile().domain(a, extended);
            alpha
                .insert(a, dom[rng.random_range(0..dom.len())])
                .unwrap();
        }
    }
    alpha
}

fn tree_surgery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut trees = 0;
    let mut restrictions = 0;
    while trees < 50 {
        let n = rng.random_range(1..=4);
        let d = rng.random_range(1..=n);
        let k = rng.random_range(1..=3);
        let s = random_system(n, d, k, rng.random(), &RandomConstraints::default()).unwrap();
        if s.n() == 0 {
            continue;
        }
        let p = ProblemKind::ALL[trees % 6];
        let r = min_depth(&s, p, SolveLimits::default()).unwrap();
        ensure(solves(&r.tree, &s, p), || format!("solver tree fails {p}"))?;
        trees += 1;

        if p.is_extended() {
            ensure(solves(&project_o(&r.tree), &s, p.plain()), || {
                format!("projection of {p} tree fails")
            })?;
        }
        let alpha = random_alpha(&s, p.is_extended(), &mut rng);
        if let Ok(out) = restrict_tree(&r.tree, &alpha, &s) {
            ensure(solves(&out.tree, &out.system, p), || {
                format!("restriction by {alpha} fails {p}")
            })?;
            restrictions += 1;
        }
        let mode = match p {
            ProblemKind::ESR => Some(Mode::Sr),
            ProblemKind::EAD => Some(Mode::Ad),
            _ => None,
        };
        if let Some(mode) = mode {
            let reduced = min_depth(&s.reduce(mode), p, SolveLimits::default()).unwrap();
            let lifted = lift_from_reduced(&reduced.tree, &s, mode).unwrap();
            ensure(solves(&lifted, &s, p), || format!("lifted {p} tree fails"))?;
            ensure(lifted.depth() == reduced.depth, || {
                "lift changed depth".into()
            })?;
        }
    }
    Ok(format!("{trees} trees, {restrictions} restrictions"))
}

fn tiny_scan() -> Outcome {
    let config = AuditConfig {
        trials: 0,
        exhaustive_tiny: true,
        ..AuditConfig::default()
    };
    let report = run_audit(&config);
    ensure(report.is_clean(), || report_failures(&report))?;
    let expected = [
        ((2, 1, 1), 1),
        ((2, 1, 2), 1),
        ((2, 2, 1), 2),
        ((2, 2, 2), 2),
    ];
    let mut systems = 0;
    for ((n, d, k), want) in expected {
        let span = report
            .classes
            .get(&(n, d, k))
            .ok_or(format!("class ({n},{d},{k}) missing"))?;
        let max_sr = span.depths[&ProblemKind::SR].1;
        let bound = class_bounds(&BoundQuery {
            problem: ProblemKind::SR,
            reduced: false,
            extremum: Extremum::Max,
            n,
            d,
            k,
        })
        .unwrap();
        ensure(
            max_sr == want && bound.exact && bound.contains(want),
            || format!("class ({n},{d},{k}): max h_SR={max_sr}, expected {want} ({bound})"),
        )?;
        systems += span.systems;
    }
    Ok(format!(
        "{systems} systems within bounds, SR maxima 1,1,2,2"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 worked samples", worked_samples, Duration::from_secs(1)),
        (
            "2 solver matches brute force",
            solver_exactness,
            Duration::from_secs(120),
        ),
        (
            "3 maximum-depth witnesses",
            maximum_witnesses,
            Duration::from_secs(600),
        ),
        (
            "4 minimum-depth witnesses",
            minimum_witnesses,
            Duration::from_secs(120),
        ),
        (
            "5 constructive upper bounds",
            constructive_bounds,
            Duration::from_secs(60),
        ),
        (
            "6 inequality suite",
            inequality_suite,
            Duration::from_secs(900),
        ),
        ("7 tree surgery", tree_surgery, Duration::from_secs(120)),
        (
            "8 exhaustive tiny scan",
            tiny_scan,
            Duration::from_secs(600),
        ),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => {
                Err(format!("{msg}, but took {elapsed:.1?} (budget {budget:?})"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} ({elapsed:.2?})");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
