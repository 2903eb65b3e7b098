use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rule::{AttrId, DecisionRule, Equation, Value};

/// A consistent partial map from attributes to values (numbers or `*`).
///
/// Used for restriction systems `α`, tuples `δ̄`, and solver states.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    entries: BTreeMap<AttrId, Value>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an assignment, failing if an attribute gets two values.
    pub fn from_equations(eqs: impl IntoIterator<Item = Equation>) -> Result<Self> {
        let mut out = Self::new();
        for (a, v) in eqs {
            out.insert(a, v)?;
        }
        Ok(out)
    }

    /// Adds `a = v`; repeating an existing equation is a no-op.
    pub fn insert(&mut self, attr: AttrId, value: Value) -> Result<()> {
        match self.entries.get(&attr) {
            Some(&old) if old != value => Err(Error::InconsistentAssignment { attr }),
            _ => {
                self.entries.insert(attr, value);
                Ok(())
            }
        }
    }

    pub fn with(&self, attr: AttrId, value: Value) -> Result<Self> {
        let mut out = self.clone();
        out.insert(attr, value)?;
        Ok(out)
    }

    pub fn union(&self, other: &Assignment) -> Result<Self> {
        let mut out = self.clone();
        for (&a, &v) in &other.entries {
            out.insert(a, v)?;
        }
        Ok(out)
    }

    pub fn get(&self, attr: AttrId) -> Option<Value> {
        self.entries.get(&attr).copied()
    }

    pub fn contains(&self, attr: AttrId, value: Value) -> bool {
        self.get(attr) == Some(value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Equation> + '_ {
        self.entries.iter().map(|(&a, &v)| (a, v))
    }

    pub fn attrs(&self) -> impl Iterator<Item = AttrId> + '_ {
        self.entries.keys().copied()
    }

    /// `K(r) ⊆ α`.
    pub fn covers(&self, rule: &DecisionRule) -> bool {
        rule.lhs()
            .iter()
            .all(|&(a, v)| self.contains(a, Value::Num(v)))
    }

    /// `K(r) ∪ α` is consistent.
    pub fn agrees_with(&self, rule: &DecisionRule) -> bool {
        rule.lhs()
            .iter()
            .all(|&(a, v)| self.get(a).is_none_or(|x| x == Value::Num(v)))
    }
}

impl FromIterator<Equation> for Assignment {
    /// Panics on an inconsistent input; use [`Assignment::from_equations`] otherwise.
    fn from_iter<I: IntoIterator<Item = Equation>>(iter: I) -> Self {
        Self::from_equations(iter).expect("consistent equations")
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_conflict() {
        let mut a = Assignment::new();
        a.insert(AttrId(1), Value::Num(0)).unwrap();
        a.insert(AttrId(1), Value::Num(0)).unwrap();
        assert!(a.insert(AttrId(1), Value::Star).is_err());
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn union_checks_consistency() {
        let a: Assignment = [(AttrId(1), Value::Num(0))].into_iter().collect();
        let b: Assignment = [(AttrId(2), Value::Star)].into_iter().collect();
        let c: Assignment = [(AttrId(1), Value::Num(2))].into_iter().collect();
        assert_eq!(a.union(&b).unwrap().len(), 2);
        assert!(a.union(&c).is_err());
    }

    #[test]
    fn covers_and_agrees() {
        let r = DecisionRule::from_pairs(&[(1, 0), (2, 0)], 0);
        let alpha: Assignment = [(AttrId(1), Value::Num(0))].into_iter().collect();
        assert!(!alpha.covers(&r));
        assert!(alpha.agrees_with(&r));
        let star: Assignment = [(AttrId(2), Value::Star)].into_iter().collect();
        assert!(!star.agrees_with(&r));
    }
}
