//! Rule systems and the system-level operations on them: parameters,
//! reductions, core subsystems, restriction and completeness.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::rule::{AttrId, DecisionRule, Value};

/// Default bound on `|V(S)|` for exhaustive tuple enumeration.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 22;

/// Which reduction (and which core subsystem) to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Some Rules: a rule is dropped when a strictly shorter rule's equations
    /// are contained in it.
    Sr,
    /// All Decisions: as `Sr`, but only against rules with the same decision.
    Ad,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sr" => Ok(Mode::Sr),
            "ad" => Ok(Mode::Ad),
            _ => Err(Error::InvalidParameters(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sr => "SR",
            Mode::Ad => "AD",
        })
    }
}

/// Derived parameters of a rule system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemProfile {
    /// `|A(S)|`
    pub n: usize,
    /// Maximum rule length.
    pub d: usize,
    /// Maximum `|V_S(a)|`.
    pub k: usize,
    /// `A(S)`, ascending.
    pub attrs: Vec<AttrId>,
    /// `D(S)`
    pub decisions: BTreeSet<u64>,
    values: BTreeMap<AttrId, BTreeSet<u64>>,
}

impl SystemProfile {
    fn compute(rules: &[DecisionRule]) -> Self {
        let mut values: BTreeMap<AttrId, BTreeSet<u64>> = BTreeMap::new();
        for rule in rules {
            for &(a, v) in rule.lhs() {
                values.entry(a).or_default().insert(v);
            }
        }
        SystemProfile {
            n: values.len(),
            d: rules.iter().map(DecisionRule::len).max().unwrap_or(0),
            k: values.values().map(BTreeSet::len).max().unwrap_or(0),
            attrs: values.keys().copied().collect(),
            decisions: rules.iter().map(DecisionRule::rhs).collect(),
            values,
        }
    }

    /// `(n, d, k)`
    pub fn params(&self) -> (usize, usize, usize) {
        (self.n, self.d, self.k)
    }

    pub fn has_attr(&self, attr: AttrId) -> bool {
        self.values.contains_key(&attr)
    }

    /// `V_S(a)`; empty for attributes outside `A(S)`.
    pub fn values(&self, attr: AttrId) -> impl Iterator<Item = u64> + '_ {
        self.values.get(&attr).into_iter().flatten().copied()
    }

    pub fn value_count(&self, attr: AttrId) -> usize {
        self.values.get(&attr).map_or(0, BTreeSet::len)
    }

    /// `V_S(a)` (or `EV_S(a)` when `extended`) as ascending values, `*` last.
    pub fn domain(&self, attr: AttrId, extended: bool) -> Vec<Value> {
        let mut out: Vec<Value> = self.values(attr).map(Value::Num).collect();
        if extended && !out.is_empty() {
            out.push(Value::Star);
        }
        out
    }

    /// Whether `v` belongs to `V_S(a)` (or `EV_S(a)`).
    pub fn admits(&self, attr: AttrId, value: Value, extended: bool) -> bool {
        match value {
            Value::Star => extended && self.has_attr(attr),
            Value::Num(v) => self.values.get(&attr).is_some_and(|s| s.contains(&v)),
        }
    }

    /// `|V(S)|` or `|EV(S)|`, saturating.
    pub fn tuple_count(&self, extended: bool) -> u128 {
        self.values
            .values()
            .map(|s| s.len() as u128 + u128::from(extended))
            .fold(1u128, |acc, x| acc.saturating_mul(x))
    }
}

/// Outcome of restricting a system by an equation system `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Every rule contradicts `α`.
    Empty,
    /// `S_α`, with `index_map[i]` the position of `(r_i)_α` in it (or `None`
    /// when `r_i` contradicts `α`).
    Rules {
        system: RuleSystem,
        index_map: Vec<Option<usize>>,
    },
}

impl Restriction {
    pub fn system(&self) -> Option<&RuleSystem> {
        match self {
            Restriction::Empty => None,
            Restriction::Rules { system, .. } => Some(system),
        }
    }

    pub fn into_system(self) -> Option<RuleSystem> {
        match self {
            Restriction::Empty => None,
            Restriction::Rules { system, .. } => Some(system),
        }
    }
}

/// A finite nonempty set of decision rules, kept in first-occurrence order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSystem {
    rules: Vec<DecisionRule>,
    profile: SystemProfile,
}

impl RuleSystem {
    /// Deduplicates (keeping the first occurrence) and computes the profile.
    pub fn new(rules: impl IntoIterator<Item = DecisionRule>) -> Result<Self> {
        let mut seen = HashSet::new();
        let rules: Vec<DecisionRule> = rules
            .into_iter()
            .filter(|r| seen.insert(r.clone()))
            .collect();
        if rules.is_empty() {
            return Err(Error::EmptySystem);
        }
        let profile = SystemProfile::compute(&rules);
        Ok(RuleSystem { rules, profile })
    }

    pub fn rules(&self) -> &[DecisionRule] {
        &self.rules
    }

    pub fn rule(&self, index: usize) -> &DecisionRule {
        &self.rules[index]
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    /// Always false; a system has at least one rule.
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn profile(&self) -> &SystemProfile {
        &self.profile
    }

    pub fn n(&self) -> usize {
        self.profile.n
    }

    pub fn d(&self) -> usize {
        self.profile.d
    }

    pub fn k(&self) -> usize {
        self.profile.k
    }

    pub fn index_of(&self, rule: &DecisionRule) -> Option<usize> {
        self.rules.iter().position(|r| r == rule)
    }

    /// The subsystem made of the given rule positions, in system order.
    pub fn subsystem(&self, indices: impl IntoIterator<Item = usize>) -> Result<RuleSystem> {
        let keep: BTreeSet<usize> = indices.into_iter().collect();
        RuleSystem::new(keep.into_iter().map(|i| self.rules[i].clone()))
    }

    /// `D(Z)` for a set of rule positions.
    pub fn decisions_of<'a>(&self, rules: impl IntoIterator<Item = &'a usize>) -> BTreeSet<u64> {
        rules.into_iter().map(|&i| self.rules[i].rhs()).collect()
    }

    /// Positions kept by `R_SR` / `R_AD`.
    pub fn reduced_indices(&self, mode: Mode) -> Vec<usize> {
        (0..self.rules.len())
            .filter(|&i| {
                let r = &self.rules[i];
                !self.rules.iter().any(|other| {
                    other.lhs_strict_subset_of(r) && (mode == Mode::Sr || other.rhs() == r.rhs())
                })
            })
            .collect()
    }

    /// `R_SR(S)` or `R_AD(S)`. Never empty: rules with a minimal left-hand
    /// side always survive.
    pub fn reduce(&self, mode: Mode) -> RuleSystem {
        self.subsystem(self.reduced_indices(mode))
            .expect("a reduction keeps every rule with a minimal left-hand side")
    }

    pub fn is_reduced(&self, mode: Mode) -> bool {
        self.reduced_indices(mode).len() == self.rules.len()
    }

    /// `D_0(S)`: decisions of the length-0 rules.
    pub fn zero_length_decisions(&self) -> BTreeSet<u64> {
        self.rules
            .iter()
            .filter(|r| r.is_empty())
            .map(DecisionRule::rhs)
            .collect()
    }

    /// `I_SR(S)` or `I_AD(S)`.
    pub fn core_subsystem(&self, mode: Mode) -> RuleSystem {
        let has_empty = self.rules.iter().any(DecisionRule::is_empty);
        let keep: Vec<usize> = match mode {
            Mode::Sr if !has_empty => (0..self.rules.len()).collect(),
            Mode::Sr => (0..self.rules.len())
                .filter(|&i| self.rules[i].is_empty())
                .collect(),
            Mode::Ad => {
                let d0 = self.zero_length_decisions();
                (0..self.rules.len())
                    .filter(|&i| self.rules[i].is_empty() || !d0.contains(&self.rules[i].rhs()))
                    .collect()
            }
        };
        self.subsystem(keep)
            .expect("core subsystem of a nonempty system")
    }

    /// `S_α`: rules consistent with `α`, with the equations of `α` removed.
    ///
    /// `α` must only mention attributes of `A(S)`, with values from `EV_S`.
    pub fn restrict(&self, alpha: &Assignment) -> Result<Restriction> {
        for (a, v) in alpha.iter() {
            if !self.profile.has_attr(a) {
                return Err(Error::UnknownAttribute { attr: a });
            }
            if !self.profile.admits(a, v, true) {
                return Err(Error::InadmissibleValue { attr: a, value: v });
            }
        }
        let mut out: Vec<DecisionRule> = Vec::new();
        let mut index_map = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            if !alpha.agrees_with(rule) {
                index_map.push(None);
                continue;
            }
            let reduced = rule.retain_lhs(|a, _| alpha.get(a).is_none());
            let pos = match out.iter().position(|r| *r == reduced) {
                Some(p) => p,
                None => {
                    out.push(reduced);
                    out.len() - 1
                }
            };
            index_map.push(Some(pos));
        }
        if out.is_empty() {
            return Ok(Restriction::Empty);
        }
        Ok(Restriction::Rules {
            system: RuleSystem::new(out)?,
            index_map,
        })
    }

    /// Whether `r` is realizable for the total tuple `t`: `K(r) ⊆ K(S, t)`.
    pub fn is_realizable(&self, rule: &DecisionRule, tuple: &Assignment) -> Result<bool> {
        self.check_total(tuple)?;
        Ok(tuple.covers(rule))
    }

    fn check_total(&self, tuple: &Assignment) -> Result<()> {
        match self.profile.attrs.iter().find(|&&a| tuple.get(a).is_none()) {
            Some(&attr) => Err(Error::NotTotal { attr }),
            None => Ok(()),
        }
    }

    /// Every tuple of `V(S)` (or `EV(S)`), in lexicographic order.
    pub fn tuples(&self, extended: bool, cap: u128) -> Result<Tuples> {
        let size = self.profile.tuple_count(extended);
        if size > cap {
            return Err(Error::EnumerationCap { size, cap });
        }
        let domains: Vec<(AttrId, Vec<Value>)> = self
            .profile
            .attrs
            .iter()
            .map(|&a| (a, self.profile.domain(a, extended)))
            .collect();
        Ok(Tuples {
            counters: vec![0; domains.len()],
            domains,
            done: false,
        })
    }

    pub fn is_complete(&self) -> Result<bool> {
        self.is_complete_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    /// True iff every tuple of `V(S)` agrees with at least one rule.
    pub fn is_complete_with_cap(&self, cap: u128) -> Result<bool> {
        if self.profile.n == 0 {
            return Ok(true);
        }
        for tuple in self.tuples(false, cap)? {
            if !self.rules.iter().any(|r| tuple.agrees_with(r)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for RuleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// Odometer over a product of attribute domains.
pub struct Tuples {
    domains: Vec<(AttrId, Vec<Value>)>,
    counters: Vec<usize>,
    done: bool,
}

impl Iterator for Tuples {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let tuple = self
            .domains
            .iter()
            .zip(&self.counters)
            .map(|((a, dom), &c)| (*a, dom[c]))
            .collect();
        self.done = true;
        for i in (0..self.counters.len()).rev() {
            self.counters[i] += 1;
            if self.counters[i] < self.domains[i].1.len() {
                self.done = false;
                break;
            }
            self.counters[i] = 0;
        }
        Some(tuple)
    }
}
