//! Attributes, values and decision rules.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Attribute `a_i`, identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrId(pub u32);

impl fmt::Display for AttrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// An attribute value: a number, or the foreign symbol `*`.
///
/// `Star` sorts after every number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Num(u64),
    Star,
}

impl Value {
    pub fn is_star(self) -> bool {
        matches!(self, Value::Star)
    }

    pub fn as_num(self) -> Option<u64> {
        match self {
            Value::Num(v) => Some(v),
            Value::Star => None,
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Num(a), Value::Num(b)) => a.cmp(b),
            (Value::Num(_), Value::Star) => Ordering::Less,
            (Value::Star, Value::Num(_)) => Ordering::Greater,
            (Value::Star, Value::Star) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Num(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(v) => write!(f, "{v}"),
            Value::Star => f.write_str("*"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Num(v) => s.serialize_u64(*v),
            Value::Star => s.serialize_str("*"),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Value::Num(v)),
            Raw::Str(s) if s == "*" => Ok(Value::Star),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"*\", found {s:?}"
            ))),
        }
    }
}

/// A single equation `a = v`.
pub type Equation = (AttrId, Value);

/// `(a_{i1}=δ1) ∧ … ∧ (a_{im}=δm) → σ`.
///
/// The left-hand side is kept sorted by attribute, so two rules compare equal
/// exactly when their equation sets and decisions coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionRule {
    lhs: Vec<(AttrId, u64)>,
    rhs: u64,
}

impl DecisionRule {
    /// Builds a rule; returns the offending attribute if it occurs twice.
    pub fn new(lhs: impl IntoIterator<Item = (AttrId, u64)>, rhs: u64) -> Result<Self, AttrId> {
        let mut lhs: Vec<_> = lhs.into_iter().collect();
        lhs.sort_unstable();
        if let Some(w) = lhs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(w[0].0);
        }
        Ok(DecisionRule { lhs, rhs })
    }

    /// Shorthand for tests and generators: `rule(&[(1, 0), (2, 0)], 3)`.
    pub fn from_pairs(lhs: &[(u32, u64)], rhs: u64) -> Self {
        Self::new(lhs.iter().map(|&(a, v)| (AttrId(a), v)), rhs)
            .expect("pairwise distinct attributes")
    }

    pub fn lhs(&self) -> &[(AttrId, u64)] {
        &self.lhs
    }

    pub fn rhs(&self) -> u64 {
        self.rhs
    }

    pub fn len(&self) -> usize {
        self.lhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lhs.is_empty()
    }

    pub fn attrs(&self) -> impl Iterator<Item = AttrId> + '_ {
        self.lhs.iter().map(|&(a, _)| a)
    }

    pub fn value_of(&self, attr: AttrId) -> Option<u64> {
        self.lhs
            .binary_search_by_key(&attr, |&(a, _)| a)
            .ok()
            .map(|i| self.lhs[i].1)
    }

    /// `K(r) ⊊ K(other)`.
    pub fn lhs_strict_subset_of(&self, other: &DecisionRule) -> bool {
        self.lhs.len() < other.lhs.len()
            && self.lhs.iter().all(|&(a, v)| other.value_of(a) == Some(v))
    }

    /// Drops the equations for which `keep` is false.
    pub fn retain_lhs(&self, mut keep: impl FnMut(AttrId, u64) -> bool) -> DecisionRule {
        DecisionRule {
            lhs: self
                .lhs
                .iter()
                .copied()
                .filter(|&(a, v)| keep(a, v))
                .collect(),
            rhs: self.rhs,
        }
    }
}

impl fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, v)) in self.lhs.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{a}={v}")?;
        }
        if self.lhs.is_empty() {
            write!(f, "-> {}", self.rhs)
        } else {
            write!(f, " -> {}", self.rhs)
        }
    }
}

/// False iff some attribute occurs with two distinct values.
pub fn is_consistent<'a>(eqs: impl IntoIterator<Item = &'a Equation>) -> bool {
    let mut seen: Vec<Equation> = eqs.into_iter().copied().collect();
    seen.sort_unstable_by_key(|&(a, _)| a);
    seen.windows(2)
        .all(|w| w[0].0 != w[1].0 || w[0].1 == w[1].1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistency() {
        let a1 = AttrId(1);
        let a2 = AttrId(2);
        assert!(!is_consistent(&[(a1, Value::Num(0)), (a1, Value::Num(1))]));
        assert!(is_consistent(&[]));
        assert!(is_consistent(&[
            (a1, Value::Num(0)),
            (a2, Value::Star),
            (a1, Value::Num(0))
        ]));
        assert!(!is_consistent(&[(a2, Value::Num(0)), (a2, Value::Star)]));
    }

    #[test]
    fn star_sorts_last() {
        let mut vs = vec![Value::Star, Value::Num(3), Value::Num(0)];
        vs.sort();
        assert_eq!(vs, vec![Value::Num(0), Value::Num(3), Value::Star]);
    }

    #[test]
    fn duplicate_attribute_rejected() {
        assert_eq!(
            DecisionRule::new([(AttrId(1), 0), (AttrId(1), 1)], 0),
            Err(AttrId(1))
        );
    }

    #[test]
    fn rule_equality_ignores_written_order() {
        let r = DecisionRule::from_pairs(&[(2, 0), (1, 1)], 4);
        let s = DecisionRule::from_pairs(&[(1, 1), (2, 0)], 4);
        assert_eq!(r, s);
        assert_eq!(r.to_string(), "a1=1 & a2=0 -> 4");
    }

    #[test]
    fn value_json() {
        assert_eq!(serde_json::to_string(&Value::Star).unwrap(), "\"*\"");
        assert_eq!(serde_json::from_str::<Value>("7").unwrap(), Value::Num(7));
        assert!(serde_json::from_str::<Value>("\"x\"").is_err());
    }
}
