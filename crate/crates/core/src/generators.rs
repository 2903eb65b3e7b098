//! Named rule-system families, with certified trees where a family comes
//! with a known strategy, and seeded random systems.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::ceil_root_ratio;
use crate::error::{Error, Result};
use crate::rule::{AttrId, DecisionRule, Value};
use crate::solver::sequential_tree;
use crate::surgery::fill_missing_values;
use crate::system::{Mode, RuleSystem};
use crate::tree::{DecisionTree, Node, ProblemKind, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `{a1=0..k-1, a2=0, …, an=0}`; needs `d = 1`. Maximal `SR` depth 1.
    UnitFan,
    /// Windows of `d` consecutive zeros with distinct decisions; needs `k = 1`.
    SlidingWindow,
    /// A cycle of `a_i=1 ∧ a_{i+1}=0` rules forcing `SR` depth `n`; needs `d, k ≥ 2`.
    Cyclic,
    /// One long rule plus unit rules, all decisions distinct: `AD` and `ESR` depth `n`.
    DistinctDecisions,
    /// Contains `→ 0`, so `SR`/`AD`/`ESR`/`EAD` need no query.
    EmptyRule,
    /// One long rule, unit rules, extra values on `a1`; reduced, depth 1 when `d < n`.
    OneQuery,
    /// Same rules as [`Family::OneQuery`], for any `d ≤ n`, without a tree.
    ParamWitness,
    /// Prefix-indexed blocks; comes with an `EAR` tree of depth `≤ d + n/k^(d-1)`.
    BlockEar,
    /// Recursive construction; comes with an `ESR` tree of depth `≤ 2d⌈(nk)^(1/d)/k⌉`.
    RecursiveEsr,
    /// `{a_i=0 → 0}`: complete, `SR`/`AD` depth 1.
    CompleteChain,
    /// `{a1=0 → 0, a2=0 ∧ … ∧ an=0 → 0}`: reduced, length `n-1`, depth 1.
    LongPair,
    /// Three rules over `a1, a2` leaving `(1,1)` uncovered.
    Incomplete3,
    /// [`random_system`] with exact parameters.
    Random,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::UnitFan,
        Family::SlidingWindow,
        Family::Cyclic,
        Family::DistinctDecisions,
        Family::EmptyRule,
        Family::OneQuery,
        Family::ParamWitness,
        Family::BlockEar,
        Family::RecursiveEsr,
        Family::CompleteChain,
        Family::LongPair,
        Family::Incomplete3,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::UnitFan => "unit_fan",
            Family::SlidingWindow => "sliding_window",
            Family::Cyclic => "cyclic",
            Family::DistinctDecisions => "distinct_decisions",
            Family::EmptyRule => "empty_rule",
            Family::OneQuery => "one_query",
            Family::ParamWitness => "param_witness",
            Family::BlockEar => "block_ear",
            Family::RecursiveEsr => "recursive_esr",
            Family::CompleteChain => "complete_chain",
            Family::LongPair => "long_pair",
            Family::Incomplete3 => "incomplete_3",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, d: usize, k: usize) -> Self {
        FamilySpec {
            family,
            n,
            d,
            k,
            seed: 0,
        }
    }
}

/// A generated system and the trees known to solve it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub system: RuleSystem,
    pub certified: Vec<(ProblemKind, DecisionTree)>,
}

impl Generated {
    pub fn tree_for(&self, problem: ProblemKind) -> Option<&DecisionTree> {
        self.certified
            .iter()
            .find(|(p, _)| *p == problem)
            .map(|(_, t)| t)
    }
}

fn rule(lhs: impl IntoIterator<Item = (u32, u64)>, rhs: u64) -> DecisionRule {
    DecisionRule::new(lhs.into_iter().map(|(a, v)| (AttrId(a), v)), rhs)
        .expect("generated rules use distinct attributes")
}

fn zeros(attrs: impl IntoIterator<Item = u32>) -> impl Iterator<Item = (u32, u64)> {
    attrs.into_iter().map(|a| (a, 0))
}

fn invalid(spec: &FamilySpec, why: &str) -> Error {
    Error::InvalidParameters(format!(
        "{} with n={} d={} k={}: {why}",
        spec.family, spec.n, spec.d, spec.k
    ))
}

/// `{a1..a_d=0, a_{d+1}=0, …, a_n=0, a1=1, …, a1=k-1}`, all decisions 0.
fn long_rule_with_units(n: usize, d: usize, k: usize) -> Vec<DecisionRule> {
    let (n, d) = (n as u32, d as u32);
    let mut rules = vec![rule(zeros(1..=d), 0)];
    rules.extend((d + 1..=n).map(|i| rule([(i, 0)], 0)));
    rules.extend((1..k as u64).map(|v| rule([(1, v)], 0)));
    rules
}

pub fn gen_family(spec: &FamilySpec) -> Result<Generated> {
    let FamilySpec { n, d, k, .. } = *spec;
    let ignores_params = matches!(
        spec.family,
        Family::CompleteChain | Family::LongPair | Family::Incomplete3
    );
    if !ignores_params && (n == 0 || d == 0 || k == 0 || d > n) {
        return Err(invalid(spec, "need 1 <= d <= n and k >= 1"));
    }
    let (n32, d32) = (n as u32, d as u32);
    let mut certified = Vec::new();
    let rules: Vec<DecisionRule> = match spec.family {
        Family::UnitFan => {
            if d != 1 {
                return Err(invalid(spec, "needs d = 1"));
            }
            let mut rules: Vec<_> = (0..k as u64).map(|v| rule([(1, v)], 0)).collect();
            rules.extend((2..=n32).map(|i| rule([(i, 0)], 0)));
            rules
        }
        Family::SlidingWindow => {
            if k != 1 {
                return Err(invalid(spec, "needs k = 1"));
            }
            (1..=n32 - d32 + 1)
                .map(|i| rule(zeros(i..i + d32), u64::from(i)))
                .collect()
        }
        Family::Cyclic => {
            if d < 2 || k < 2 {
                return Err(invalid(spec, "needs d >= 2 and k >= 2"));
            }
            let mut rules = vec![rule((1..=d32).map(|i| (i, 1)), 0)];
            rules.extend((1..n32).map(|i| rule([(i, 1), (i + 1, 0)], u64::from(i))));
            rules.push(rule([(n32, 1), (1, 0)], u64::from(n32)));
            rules.extend((2..k as u64).map(|v| rule([(1, v)], 0)));
            rules
        }
        Family::DistinctDecisions => {
            let mut rules = vec![rule(zeros(1..=d32), 0)];
            rules.extend((d32 + 1..=n32).map(|i| rule([(i, 0)], u64::from(i))));
            rules.extend((1..k as u64).map(|v| rule([(1, v)], n as u64 + v)));
            rules
        }
        Family::EmptyRule => {
            let mut rules = vec![rule([], 0)];
            rules.extend(long_rule_with_units(n, d, k));
            for p in [
                ProblemKind::SR,
                ProblemKind::AD,
                ProblemKind::ESR,
                ProblemKind::EAD,
            ] {
                certified.push((p, DecisionTree::new(p.variant(), Node::terminal([0]))));
            }
            rules
        }
        Family::OneQuery | Family::ParamWitness => {
            let rules = long_rule_with_units(n, d, k);
            if spec.family == Family::OneQuery {
                if d >= n {
                    return Err(invalid(spec, "needs d < n"));
                }
                // a_n only occurs in `a_n=0 → 0`, which sits at position n - d.
                let tree = DecisionTree::new(
                    Variant::O,
                    Node::working(AttrId(n32), [(Value::Num(0), Node::terminal([n - d]))]),
                );
                certified.push((ProblemKind::SR, tree.clone()));
                certified.push((ProblemKind::AD, tree));
            }
            rules
        }
        Family::BlockEar => return block_ear(spec),
        Family::RecursiveEsr => {
            let attrs: Vec<u32> = (1..=n32).collect();
            let built = recursive_esr(&attrs, d, k as u64)?;
            let system = RuleSystem::new(built.rules.clone())?;
            if system.len() != built.rules.len() {
                return Err(Error::InvalidParameters(
                    "recursive construction produced duplicate rules".into(),
                ));
            }
            let root = fill_missing_values(&built.root, system.profile());
            return Ok(Generated {
                system,
                certified: vec![(ProblemKind::ESR, DecisionTree::new(Variant::E, root))],
            });
        }
        Family::CompleteChain => {
            if n == 0 {
                return Err(invalid(spec, "needs n >= 1"));
            }
            let rules: Vec<_> = (1..=n32).map(|i| rule([(i, 0)], 0)).collect();
            let tree = DecisionTree::new(
                Variant::O,
                Node::working(AttrId(1), [(Value::Num(0), Node::terminal([0]))]),
            );
            certified.push((ProblemKind::SR, tree.clone()));
            certified.push((ProblemKind::AD, tree));
            rules
        }
        Family::LongPair => {
            if n < 2 {
                return Err(invalid(spec, "needs n >= 2"));
            }
            let rules = vec![rule([(1, 0)], 0), rule(zeros(2..=n32), 0)];
            let tree = DecisionTree::new(
                Variant::O,
                Node::working(AttrId(1), [(Value::Num(0), Node::terminal([0]))]),
            );
            certified.push((ProblemKind::SR, tree.clone()));
            certified.push((ProblemKind::AD, tree));
            rules
        }
        Family::Incomplete3 => vec![
            rule([(1, 0), (2, 0)], 0),
            rule([(1, 1), (2, 0)], 0),
            rule([(1, 0), (2, 1)], 0),
        ],
        Family::Random => {
            let constraints = RandomConstraints {
                exact: true,
                ..RandomConstraints::default()
            };
            return Ok(Generated {
                system: random_system(n, d, k, spec.seed, &constraints)?,
                certified,
            });
        }
    };
    let system = RuleSystem::new(rules)?;
    if spec.family == Family::Cyclic && !system.is_reduced(Mode::Sr) {
        return Err(invalid(spec, "construction is not SR-reduced"));
    }
    Ok(Generated { system, certified })
}

/// Lexicographic enumeration of `{0..k-1}^len`.
fn tuples(len: usize, k: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..k).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

const MAX_BLOCKS: usize = 1 << 16;

fn block_ear(spec: &FamilySpec) -> Result<Generated> {
    let FamilySpec { n, d, k, .. } = *spec;
    if d < 2 || k < 2 {
        return Err(invalid(spec, "needs d >= 2 and k >= 2"));
    }
    let blocks_len = k
        .checked_pow(d as u32 - 1)
        .filter(|&b| b <= MAX_BLOCKS)
        .ok_or(Error::SizeCap {
            what: "block count k^(d-1)",
            cap: MAX_BLOCKS,
        })?;
    let prefixes = tuples(d - 1, k as u64);
    let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); blocks_len];
    for (m, a) in (d as u32..=n as u32).enumerate() {
        blocks[m % blocks_len].push(a);
    }
    let prefix_eqs = |p: &[u64]| -> Vec<(u32, u64)> { (1..).zip(p.iter().copied()).collect() };
    let mut rules = Vec::new();
    // rule positions per block member, or the single prefix rule
    let mut positions: Vec<Vec<usize>> = Vec::with_capacity(blocks_len);
    for (p, block) in prefixes.iter().zip(&blocks) {
        let mut here = Vec::new();
        if block.is_empty() {
            here.push(rules.len());
            rules.push(rule(prefix_eqs(p), 0));
        } else {
            for &a in block {
                here.push(rules.len());
                let mut lhs = prefix_eqs(p);
                lhs.push((a, 0));
                rules.push(rule(lhs, 0));
            }
        }
        positions.push(here);
    }
    let system = RuleSystem::new(rules)?;

    fn block_node(block: &[u32], positions: &[usize], chosen: &mut Vec<usize>) -> Node {
        let (Some((&a, rest)), Some((&pos, rest_pos))) =
            (block.split_first(), positions.split_first())
        else {
            return Node::terminal(chosen.iter().copied());
        };
        chosen.push(pos);
        let zero = block_node(rest, rest_pos, chosen);
        chosen.pop();
        let star = block_node(rest, rest_pos, chosen);
        Node::working(AttrId(a), [(Value::Num(0), zero), (Value::Star, star)])
    }

    fn prefix_node(
        depth: usize,
        index: usize,
        k: u64,
        prefix_len: usize,
        blocks: &[Vec<u32>],
        positions: &[Vec<usize>],
    ) -> Node {
        if depth == prefix_len {
            return if blocks[index].is_empty() {
                Node::terminal(positions[index].iter().copied())
            } else {
                block_node(&blocks[index], &positions[index], &mut Vec::new())
            };
        }
        let mut edges: Vec<(Value, Node)> = (0..k)
            .map(|v| {
                let child = prefix_node(
                    depth + 1,
                    index * k as usize + v as usize,
                    k,
                    prefix_len,
                    blocks,
                    positions,
                );
                (Value::Num(v), child)
            })
            .collect();
        edges.push((Value::Star, Node::terminal([])));
        Node::working(AttrId(depth as u32 + 1), edges)
    }

    let root = prefix_node(0, 0, k as u64, d - 1, &blocks, &positions);
    Ok(Generated {
        system,
        certified: vec![(ProblemKind::EAR, DecisionTree::new(Variant::E, root))],
    })
}

/// Rules plus an e-tree whose terminals index them. Edges may still be
/// missing for values that only occur elsewhere in the enclosing system.
struct Built {
    rules: Vec<DecisionRule>,
    root: Node,
}

fn built_sequential(rules: Vec<DecisionRule>) -> Result<Built> {
    let system = RuleSystem::new(rules)?;
    let tree = sequential_tree(&system, ProblemKind::ESR)?;
    Ok(Built {
        rules: system.rules().to_vec(),
        root: tree.root,
    })
}

/// An `SR`-reduced system over `attrs` with maximum length `depth`, all
/// decisions 0, and an `ESR` tree of depth `≤ 2·depth·⌈(nk)^(1/depth)/k⌉`.
fn recursive_esr(attrs: &[u32], depth: usize, k: u64) -> Result<Built> {
    let n = attrs.len();
    let t = ceil_root_ratio(n, depth, k as usize);
    if depth == 1 || 2 * depth * t >= n {
        let mut rules = vec![rule(zeros(attrs[..depth].iter().copied()), 0)];
        rules.extend((1..k).map(|v| rule([(attrs[0], v)], 0)));
        rules.extend(attrs[depth..].iter().map(|&a| rule([(a, 0)], 0)));
        return built_sequential(rules);
    }
    let inner = depth - 1;
    let groups = 2 * t * k as usize;
    let cap = (n - 2 * t).div_ceil(groups);
    // sizes of A_1..A_{2tk}
    let mut left = n - 2 * t;
    let mut sizes = Vec::with_capacity(groups);
    for i in 0..groups {
        let size = if i == 0 {
            inner.max(cap.min(left))
        } else {
            cap.min(left)
        };
        sizes.push(size);
        left -= size;
    }
    debug_assert_eq!(left, 0);
    let mut next = 2 * t;
    let blocks: Vec<Vec<u32>> = sizes
        .iter()
        .map(|&s| {
            let block = if s == 0 {
                vec![attrs[n - 1]]
            } else {
                attrs[next..next + s].to_vec()
            };
            next += s;
            block
        })
        .collect();
    let parts: Vec<Built> = blocks
        .iter()
        .map(|block| {
            if block.len() <= inner {
                let mut rules = vec![rule(zeros(block.iter().copied()), 0)];
                rules.extend((1..k).map(|v| rule([(block[0], v)], 0)));
                built_sequential(rules)
            } else {
                recursive_esr(block, inner, k)
            }
        })
        .collect::<Result<_>>()?;

    let head = &attrs[..2 * t];
    let mut rules = Vec::new();
    let mut pair_index = std::collections::HashMap::new();
    for i in 0..head.len() {
        for j in i + 1..head.len() {
            for dv in 0..k {
                for sv in 0..k {
                    pair_index.insert((i, dv, j, sv), rules.len());
                    rules.push(rule([(head[i], dv), (head[j], sv)], 0));
                }
            }
        }
    }
    let mut offsets = Vec::with_capacity(groups);
    for j in 0..head.len() {
        for sv in 0..k {
            let part = &parts[j * k as usize + sv as usize];
            offsets.push(rules.len());
            for r in &part.rules {
                let mut lhs: Vec<(u32, u64)> = r.lhs().iter().map(|&(a, v)| (a.0, v)).collect();
                lhs.push((head[j], sv));
                rules.push(rule(lhs, 0));
            }
        }
    }

    struct Ctx<'a> {
        head: &'a [u32],
        k: u64,
        parts: &'a [Built],
        offsets: &'a [usize],
        pair_index: &'a std::collections::HashMap<(usize, u64, usize, u64), usize>,
    }

    fn head_node(ctx: &Ctx, pos: usize, seen: Option<(usize, u64)>) -> Node {
        if pos == ctx.head.len() {
            return match seen {
                None => Node::terminal([]),
                Some((j, sv)) => {
                    let g = j * ctx.k as usize + sv as usize;
                    let off = ctx.offsets[g];
                    ctx.parts[g]
                        .root
                        .map_terminals(&mut |z| z.iter().map(|&i| i + off).collect())
                }
            };
        }
        let mut edges: Vec<(Value, Node)> = (0..ctx.k)
            .map(|v| {
                let child = match seen {
                    Some((j, sv)) => Node::terminal([ctx.pair_index[&(j, sv, pos, v)]]),
                    None => head_node(ctx, pos + 1, Some((pos, v))),
                };
                (Value::Num(v), child)
            })
            .collect();
        edges.push((Value::Star, head_node(ctx, pos + 1, seen)));
        Node::working(AttrId(ctx.head[pos]), edges)
    }

    let ctx = Ctx {
        head,
        k,
        parts: &parts,
        offsets: &offsets,
        pair_index: &pair_index,
    };
    let root = head_node(&ctx, 0, None);
    Ok(Built { rules, root })
}

/// Extra requirements for [`random_system`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RandomConstraints {
    pub sr_reduced: bool,
    pub ad_reduced: bool,
    /// Profile must be exactly `(n, d, k)`.
    pub exact: bool,
    /// Upper limit on the number of rules drawn (before deduplication).
    pub max_rules: Option<usize>,
}

pub const RANDOM_RETRIES: usize = 10_000;

/// A seeded random system with `n(S) ≤ n`, `d(S) ≤ d`, `k(S) ≤ k`.
///
/// Each draw takes between 1 and `2n+1` rules (or `max_rules`). Rule lengths
/// are uniform in `[1, d]`, attributes distinct within a rule, values uniform
/// in `[0, k)`, decisions uniform in `[0, n]`. Without reducedness
/// constraints a rule has an empty left-hand side with probability 1/10.
/// Draws violating the constraints are rejected, up to [`RANDOM_RETRIES`].
pub fn random_system(
    n: usize,
    d: usize,
    k: usize,
    seed: u64,
    constraints: &RandomConstraints,
) -> Result<RuleSystem> {
    if n == 0 || d == 0 || k == 0 || d > n {
        return Err(Error::InvalidParameters(format!(
            "random system needs 1 <= d <= n and k >= 1 (n={n} d={d} k={k})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_rules = constraints.max_rules.unwrap_or(2 * n + 1).max(1);
    let allow_empty = !constraints.sr_reduced && !constraints.ad_reduced;
    for _ in 0..RANDOM_RETRIES {
        let count = rng.random_range(1..=max_rules);
        let rules: Vec<DecisionRule> = (0..count)
            .map(|_| {
                let len = if allow_empty && rng.random_ratio(1, 10) {
                    0
                } else {
                    rng.random_range(1..=d)
                };
                let attrs = sample(&mut rng, n, len);
                let lhs: Vec<(u32, u64)> = attrs
                    .into_iter()
                    .map(|a| (a as u32 + 1, rng.random_range(0..k as u64)))
                    .collect();
                rule(lhs, rng.random_range(0..=n as u64))
            })
            .collect();
        let system = RuleSystem::new(rules)?;
        if constraints.exact && system.profile().params() != (n, d, k) {
            continue;
        }
        if constraints.sr_reduced && !system.is_reduced(Mode::Sr) {
            continue;
        }
        if constraints.ad_reduced && !system.is_reduced(Mode::Ad) {
            continue;
        }
        return Ok(system);
    }
    Err(Error::RetriesExhausted(RANDOM_RETRIES))
}
