//! Tree transformations: dropping `*` branches, restricting a tree to
//! `S_α`, and lifting a tree for a reduced system back to the full system.

use std::collections::BTreeSet;

use crate::assignment::Assignment;
use crate::error::{Error, Result};
use crate::rule::{AttrId, Value};
use crate::system::{Mode, Restriction, RuleSystem, SystemProfile};
use crate::tree::{DecisionTree, Edge, Node, ProblemKind, Variant};
use crate::verify::verify;

/// `o(Γ)`: the e-tree with every `*` edge and the subtree below it removed.
pub fn project_o(tree: &DecisionTree) -> DecisionTree {
    fn strip(node: &Node) -> Node {
        match node {
            Node::Terminal { .. } => node.clone(),
            Node::Working { attr, edges } => Node::Working {
                attr: *attr,
                edges: edges
                    .iter()
                    .filter(|e| !e.label.is_star())
                    .map(|e| Edge {
                        label: e.label,
                        child: strip(&e.child),
                    })
                    .collect(),
            },
        }
    }
    DecisionTree::new(Variant::O, strip(&tree.root))
}

/// `Γ_α` together with the intermediate `Γ'_α` and the system `S_α` it
/// lives over.
#[derive(Clone, Debug)]
pub struct RestrictedTree {
    pub system: RuleSystem,
    /// `index_map[i]`: position of `(r_i)_α` in `system`.
    pub index_map: Vec<Option<usize>>,
    /// Edges pruned, nodes on dropped attributes still present, labels untouched.
    pub pruned: DecisionTree,
    pub tree: DecisionTree,
}

/// Restricts a tree over `S` to a tree over `S_α`.
///
/// At an attribute of `S_α` only the edges labeled from `EV_{S_α}` (`V_{S_α}`
/// for o-trees) are kept. Any other attribute is spliced out, following the
/// edge for its `α` value or, if `α` leaves it open, the least number in
/// `V_S`.
pub fn restrict_tree(
    tree: &DecisionTree,
    alpha: &Assignment,
    system: &RuleSystem,
) -> Result<RestrictedTree> {
    if system.n() == 0 {
        return Err(Error::InvalidParameters(
            "tree restriction needs a system with attributes".into(),
        ));
    }
    let extended = tree.variant.is_extended();
    for (a, v) in alpha.iter() {
        if !system.profile().has_attr(a) {
            return Err(Error::UnknownAttribute { attr: a });
        }
        if !system.profile().admits(a, v, extended) {
            return Err(Error::InadmissibleValue { attr: a, value: v });
        }
    }
    let (restricted, index_map) = match system.restrict(alpha)? {
        Restriction::Empty => return Err(Error::EmptyRestriction),
        Restriction::Rules { system, index_map } => (system, index_map),
    };
    let ctx = Pruning {
        full: system.profile(),
        restricted: restricted.profile(),
        alpha,
        extended,
    };
    let pruned = ctx.prune(&tree.root)?;
    let relabel = |rules: &BTreeSet<usize>| -> BTreeSet<usize> {
        rules.iter().filter_map(|&i| index_map[i]).collect()
    };
    let spliced = splice(&pruned, restricted.profile()).map_terminals(&mut |z| relabel(z));
    Ok(RestrictedTree {
        pruned: DecisionTree::new(tree.variant, pruned),
        tree: DecisionTree::new(tree.variant, spliced),
        system: restricted,
        index_map,
    })
}

struct Pruning<'a> {
    full: &'a SystemProfile,
    restricted: &'a SystemProfile,
    alpha: &'a Assignment,
    extended: bool,
}

impl Pruning<'_> {
    fn prune(&self, node: &Node) -> Result<Node> {
        let Node::Working { attr, edges } = node else {
            return Ok(node.clone());
        };
        let keep = |label: Value| -> bool {
            if self.restricted.has_attr(*attr) {
                self.restricted.admits(*attr, label, self.extended)
            } else {
                Some(label) == self.spliced_value(*attr)
            }
        };
        let edges = edges
            .iter()
            .filter(|e| keep(e.label))
            .map(|e| {
                Ok(Edge {
                    label: e.label,
                    child: self.prune(&e.child)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if edges.is_empty() {
            return Err(Error::MalformedTree(format!(
                "no edge of {attr} survives restriction"
            )));
        }
        Ok(Node::Working { attr: *attr, edges })
    }

    fn spliced_value(&self, attr: AttrId) -> Option<Value> {
        self.alpha
            .get(attr)
            .or_else(|| self.full.values(attr).next().map(Value::Num))
    }
}

fn splice(node: &Node, restricted: &SystemProfile) -> Node {
    match node {
        Node::Terminal { .. } => node.clone(),
        Node::Working { attr, edges } if !restricted.has_attr(*attr) => {
            splice(&edges[0].child, restricted)
        }
        Node::Working { attr, edges } => Node::Working {
            attr: *attr,
            edges: edges
                .iter()
                .map(|e| Edge {
                    label: e.label,
                    child: splice(&e.child, restricted),
                })
                .collect(),
        },
    }
}

/// Turns an e-tree solving `ESR`/`EAD` for `R = reduce(S, mode)` into one
/// solving the same problem for `S`, of the same depth.
///
/// Values of `EV_S(a)` missing from `EV_R(a)` get a copy of the `*` subtree.
pub fn lift_from_reduced(
    tree: &DecisionTree,
    system: &RuleSystem,
    mode: Mode,
) -> Result<DecisionTree> {
    let problem = match mode {
        Mode::Sr => ProblemKind::ESR,
        Mode::Ad => ProblemKind::EAD,
    };
    let reduced = system.reduce(mode);
    if let Some(c) = verify(tree, &reduced, problem)?.counterexample() {
        return Err(Error::NotSolving {
            problem: problem.to_string(),
            reason: format!("over the reduced system, {c}"),
        });
    }
    let positions: Vec<usize> = reduced
        .rules()
        .iter()
        .map(|r| {
            system
                .index_of(r)
                .expect("reduced rules come from the system")
        })
        .collect();
    let lifted = fill_missing_values(&tree.root, system.profile())
        .map_terminals(&mut |z| z.iter().map(|&i| positions[i]).collect());
    Ok(DecisionTree::new(Variant::E, lifted))
}

/// Gives every node the full `EV_S(a)` edge set, copying the `*` subtree for
/// missing values.
pub(crate) fn fill_missing_values(node: &Node, full: &SystemProfile) -> Node {
    let Node::Working { attr, edges } = node else {
        return node.clone();
    };
    let mut out: Vec<(Value, Node)> = edges
        .iter()
        .map(|e| (e.label, fill_missing_values(&e.child, full)))
        .collect();
    let star = out
        .iter()
        .find(|(v, _)| v.is_star())
        .map(|(_, child)| child.clone())
        .expect("e-tree nodes have a `*` edge");
    for v in full.values(*attr) {
        if !out.iter().any(|(l, _)| *l == Value::Num(v)) {
            out.push((Value::Num(v), star.clone()));
        }
    }
    Node::working(*attr, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_assignment, parse_system};
    use crate::solver::{min_depth, SolveLimits};

    #[test]
    fn project_keeps_only_numbers() {
        let s = parse_system("a1=0 -> 0\na1=1 & a2=0 -> 1").unwrap();
        let r = min_depth(&s, ProblemKind::EAR, SolveLimits::default()).unwrap();
        let o = project_o(&r.tree);
        assert!(verify(&o, &s, ProblemKind::AR).unwrap().is_solving());
        assert!(o
            .complete_paths()
            .iter()
            .all(|p| p.hops.iter().all(|(_, v)| !v.is_star())));
    }

    #[test]
    fn empty_alpha_changes_nothing() {
        let s = parse_system("a1=0 & a2=0 -> 0\na1=1 & a3=0 -> 0\na2=1 & a3=1 -> 0").unwrap();
        let r = min_depth(&s, ProblemKind::AR, SolveLimits::default()).unwrap();
        let out = restrict_tree(&r.tree, &Assignment::new(), &s).unwrap();
        assert_eq!(out.tree, r.tree);
        assert_eq!(out.system, s);
    }

    #[test]
    fn restriction_to_nothing_is_an_error() {
        let s = parse_system("a1=0 -> 0").unwrap();
        let r = min_depth(&s, ProblemKind::ESR, SolveLimits::default()).unwrap();
        let alpha = parse_assignment("a1=*").unwrap();
        assert_eq!(
            restrict_tree(&r.tree, &alpha, &s).unwrap_err(),
            Error::EmptyRestriction
        );
    }

    #[test]
    fn lift_identity_when_already_reduced() {
        let s = parse_system("a1=0 -> 0\na2=0 -> 1").unwrap();
        let r = min_depth(&s, ProblemKind::ESR, SolveLimits::default()).unwrap();
        assert_eq!(lift_from_reduced(&r.tree, &s, Mode::Sr).unwrap(), r.tree);
    }

    #[test]
    fn lift_over_dropped_rules() {
        let s = parse_system("a1=0 & a2=0 & a3=0 -> 0\na1=0 & a2=0 -> 0\na1=0 -> 1").unwrap();
        let reduced = s.reduce(Mode::Sr);
        let r = min_depth(&reduced, ProblemKind::ESR, SolveLimits::default()).unwrap();
        let lifted = lift_from_reduced(&r.tree, &s, Mode::Sr).unwrap();
        assert!(verify(&lifted, &s, ProblemKind::ESR).unwrap().is_solving());
        assert_eq!(lifted.depth(), r.depth);
    }
}
