//! Decision trees over a rule system, in the ordinary (`o`) and extended
//! (`e`) variants, and their complete paths.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::rule::{is_consistent, AttrId, Equation, Value};
use crate::system::RuleSystem;

/// `O` trees branch over `V_S(a)`, `E` trees over `EV_S(a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    O,
    E,
}

impl Variant {
    pub fn is_extended(self) -> bool {
        self == Variant::E
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::O => "o",
            Variant::E => "e",
        })
    }
}

/// The three problem families, before choosing the value universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    AllRules,
    AllDecisions,
    SomeRules,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    AR,
    EAR,
    AD,
    EAD,
    SR,
    ESR,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        ProblemKind::AR,
        ProblemKind::EAR,
        ProblemKind::AD,
        ProblemKind::EAD,
        ProblemKind::SR,
        ProblemKind::ESR,
    ];

    pub fn is_extended(self) -> bool {
        matches!(self, ProblemKind::EAR | ProblemKind::EAD | ProblemKind::ESR)
    }

    pub fn variant(self) -> Variant {
        if self.is_extended() {
            Variant::E
        } else {
            Variant::O
        }
    }

    pub fn semantics(self) -> Semantics {
        match self {
            ProblemKind::AR | ProblemKind::EAR => Semantics::AllRules,
            ProblemKind::AD | ProblemKind::EAD => Semantics::AllDecisions,
            ProblemKind::SR | ProblemKind::ESR => Semantics::SomeRules,
        }
    }

    /// `AR`/`AD`/`SR` for either variant.
    pub fn plain(self) -> ProblemKind {
        match self.semantics() {
            Semantics::AllRules => ProblemKind::AR,
            Semantics::AllDecisions => ProblemKind::AD,
            Semantics::SomeRules => ProblemKind::SR,
        }
    }

    /// `EAR`/`EAD`/`ESR` for either variant.
    pub fn extended(self) -> ProblemKind {
        match self.semantics() {
            Semantics::AllRules => ProblemKind::EAR,
            Semantics::AllDecisions => ProblemKind::EAD,
            Semantics::SomeRules => ProblemKind::ESR,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameters(format!("unknown problem {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: Value,
    pub child: Node,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Working {
        attr: AttrId,
        edges: Vec<Edge>,
    },
    /// Positions into the rule system's canonical order.
    Terminal {
        rules: BTreeSet<usize>,
    },
}

impl Node {
    pub fn terminal(rules: impl IntoIterator<Item = usize>) -> Node {
        Node::Terminal {
            rules: rules.into_iter().collect(),
        }
    }

    /// Edges are stored ascending, `*` last.
    pub fn working(attr: AttrId, edges: impl IntoIterator<Item = (Value, Node)>) -> Node {
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|(label, child)| Edge { label, child })
            .collect();
        edges.sort_by_key(|e| e.label);
        Node::Working { attr, edges }
    }

    pub fn child(&self, label: Value) -> Option<&Node> {
        match self {
            Node::Working { edges, .. } => {
                edges.iter().find(|e| e.label == label).map(|e| &e.child)
            }
            Node::Terminal { .. } => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Terminal { .. } => 0,
            Node::Working { edges, .. } => {
                1 + edges.iter().map(|e| e.child.depth()).max().unwrap_or(0)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Node::Terminal { .. } => 1,
            Node::Working { edges, .. } => {
                1 + edges.iter().map(|e| e.child.node_count()).sum::<usize>()
            }
        }
    }

    /// Applies `f` to every terminal label.
    pub fn map_terminals(&self, f: &mut impl FnMut(&BTreeSet<usize>) -> BTreeSet<usize>) -> Node {
        match self {
            Node::Terminal { rules } => Node::Terminal { rules: f(rules) },
            Node::Working { attr, edges } => Node::Working {
                attr: *attr,
                edges: edges
                    .iter()
                    .map(|e| Edge {
                        label: e.label,
                        child: e.child.map_terminals(f),
                    })
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    pub variant: Variant,
    pub root: Node,
}

/// A root-to-terminal path `ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletePath {
    /// One `(attribute, edge label)` per working node; may repeat attributes.
    pub hops: Vec<Equation>,
    /// `τ(ξ)`
    pub rules: BTreeSet<usize>,
}

impl CompletePath {
    /// `A(ξ)`
    pub fn attrs(&self) -> BTreeSet<AttrId> {
        self.hops.iter().map(|&(a, _)| a).collect()
    }

    /// `K(ξ)` as a set.
    pub fn equations(&self) -> BTreeSet<Equation> {
        self.hops.iter().copied().collect()
    }

    pub fn is_consistent(&self) -> bool {
        is_consistent(&self.hops)
    }

    /// `h(ξ)`: working nodes on the path.
    pub fn h(&self) -> usize {
        self.hops.len()
    }

    /// `K(ξ)` as an assignment; `None` when inconsistent.
    pub fn assignment(&self) -> Option<Assignment> {
        Assignment::from_equations(self.hops.iter().copied()).ok()
    }
}

impl fmt::Display for CompletePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for (a, v) in &self.hops {
            write!(f, " -{a}={v}->")?;
        }
        let rules: Vec<String> = self.rules.iter().map(|i| format!("r{}", i + 1)).collect();
        write!(f, " {{{}}}", rules.join(","))
    }
}

/// First violation of the tree-over-`S` conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Malformation {
    /// Hops leading to the offending node.
    pub location: Vec<Equation>,
    pub message: String,
}

impl fmt::Display for Malformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("at root")?;
        for (a, v) in &self.location {
            write!(f, "/{a}={v}")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl DecisionTree {
    pub fn new(variant: Variant, root: Node) -> Self {
        DecisionTree { variant, root }
    }

    /// `h(Γ)`
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn node_count(&self) -> usize {
        self.root.node_count()
    }

    /// `CP(Γ)`, left to right.
    pub fn complete_paths(&self) -> Vec<CompletePath> {
        let mut out = Vec::new();
        let mut hops = Vec::new();
        collect_paths(&self.root, &mut hops, &mut out);
        out
    }

    /// Follows the edges selected by a tuple and returns the terminal label.
    pub fn evaluate(&self, tuple: &Assignment) -> Option<&BTreeSet<usize>> {
        let mut node = &self.root;
        loop {
            match node {
                Node::Terminal { rules } => return Some(rules),
                Node::Working { attr, .. } => node = node.child(tuple.get(*attr)?)?,
            }
        }
    }

    /// Checks the tree against `S`: attributes from `A(S)`, edge labels
    /// exactly `V_S(a)` (`EV_S(a)` for `E` trees), terminal labels within `S`.
    pub fn well_formed(&self, system: &RuleSystem) -> std::result::Result<(), Malformation> {
        let mut loc = Vec::new();
        check_node(&self.root, self.variant, system, &mut loc)
    }
}

fn collect_paths(node: &Node, hops: &mut Vec<Equation>, out: &mut Vec<CompletePath>) {
    match node {
        Node::Terminal { rules } => out.push(CompletePath {
            hops: hops.clone(),
            rules: rules.clone(),
        }),
        Node::Working { attr, edges } => {
            for e in edges {
                hops.push((*attr, e.label));
                collect_paths(&e.child, hops, out);
                hops.pop();
            }
        }
    }
}

fn check_node(
    node: &Node,
    variant: Variant,
    system: &RuleSystem,
    loc: &mut Vec<Equation>,
) -> std::result::Result<(), Malformation> {
    let fail = |loc: &Vec<Equation>, message: String| {
        Err(Malformation {
            location: loc.clone(),
            message,
        })
    };
    match node {
        Node::Terminal { rules } => match rules.iter().find(|&&i| i >= system.len()) {
            Some(i) => fail(
                loc,
                format!("terminal names rule {i}, system has {}", system.len()),
            ),
            None => Ok(()),
        },
        Node::Working { attr, edges } => {
            if !system.profile().has_attr(*attr) {
                return fail(loc, format!("attribute {attr} is not in A(S)"));
            }
            let want = system.profile().domain(*attr, variant.is_extended());
            let mut got: Vec<Value> = edges.iter().map(|e| e.label).collect();
            got.sort();
            if got.windows(2).any(|w| w[0] == w[1]) {
                return fail(loc, format!("repeated edge label on {attr}"));
            }
            if got != want {
                let show = |vs: &[Value]| {
                    vs.iter()
                        .map(Value::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                };
                return fail(
                    loc,
                    format!(
                        "{attr} has edges {{{}}}, expected {{{}}}",
                        show(&got),
                        show(&want)
                    ),
                );
            }
            for e in edges {
                loc.push((*attr, e.label));
                check_node(&e.child, variant, system, loc)?;
                loc.pop();
            }
            Ok(())
        }
    }
}
