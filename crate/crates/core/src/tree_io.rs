//! Tree files (JSON) and Graphviz export.
//!
//! ```json
//! {"variant":"o","system_digest":"9f…","root":
//!   {"attr":1,"edges":[{"label":0,"child":{"rules":[0]}}]}}
//! ```
//!
//! Terminals name rules by position in the system's canonical order; the
//! digest (SHA-256 of the canonical rule text) ties a tree to its system.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dsl::to_dsl;
use crate::error::{Error, Result};
use crate::rule::{AttrId, Value};
use crate::system::RuleSystem;
use crate::tree::{DecisionTree, Edge, Node, Variant};

pub fn system_digest(system: &RuleSystem) -> String {
    hex::encode(Sha256::digest(to_dsl(system).as_bytes()).as_slice())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeFile {
    variant: String,
    system_digest: String,
    root: NodeFile,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeFile {
    Working { attr: u32, edges: Vec<EdgeFile> },
    Terminal { rules: Vec<usize> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    label: Value,
    child: NodeFile,
}

fn to_file(node: &Node) -> NodeFile {
    match node {
        Node::Terminal { rules } => NodeFile::Terminal {
            rules: rules.iter().copied().collect(),
        },
        Node::Working { attr, edges } => NodeFile::Working {
            attr: attr.0,
            edges: edges
                .iter()
                .map(|e| EdgeFile {
                    label: e.label,
                    child: to_file(&e.child),
                })
                .collect(),
        },
    }
}

fn from_file(node: NodeFile) -> Node {
    match node {
        NodeFile::Terminal { rules } => Node::terminal(rules),
        NodeFile::Working { attr, edges } => Node::Working {
            attr: AttrId(attr),
            edges: edges
                .into_iter()
                .map(|e| Edge {
                    label: e.label,
                    child: from_file(e.child),
                })
                .collect(),
        },
    }
}

pub fn tree_to_json(tree: &DecisionTree, system: &RuleSystem) -> String {
    let file = TreeFile {
        variant: tree.variant.to_string(),
        system_digest: system_digest(system),
        root: to_file(&tree.root),
    };
    serde_json::to_string_pretty(&file).expect("tree serializes")
}

/// Reads a tree file, rejecting trees built for another system.
pub fn tree_from_json(text: &str, system: &RuleSystem) -> Result<DecisionTree> {
    let file: TreeFile =
        serde_json::from_str(text).map_err(|e| Error::TreeFormat(e.to_string()))?;
    let expected = system_digest(system);
    if file.system_digest != expected {
        return Err(Error::DigestMismatch {
            expected,
            found: file.system_digest,
        });
    }
    let variant = match file.variant.as_str() {
        "o" => Variant::O,
        "e" => Variant::E,
        other => return Err(Error::TreeFormat(format!("unknown variant {other:?}"))),
    };
    Ok(DecisionTree::new(variant, from_file(file.root)))
}

/// Graphviz source: attribute ovals, value-labeled edges, rule-set boxes.
pub fn to_dot(tree: &DecisionTree) -> String {
    let mut out = String::from("digraph tree {\n  node [fontname=\"Helvetica\"];\n");
    let mut next = 0usize;
    dot_node(&tree.root, &mut out, &mut next);
    out.push_str("}\n");
    out
}

fn dot_node(node: &Node, out: &mut String, next: &mut usize) -> usize {
    let id = *next;
    *next += 1;
    match node {
        Node::Terminal { rules } => {
            let names: Vec<String> = rules.iter().map(|i| format!("r{}", i + 1)).collect();
            let _ = writeln!(
                out,
                "  n{id} [shape=box, label=\"{{{}}}\"];",
                names.join(",")
            );
        }
        Node::Working { attr, edges } => {
            let _ = writeln!(out, "  n{id} [shape=oval, label=\"{attr}\"];");
            for e in edges {
                let child = dot_node(&e.child, out, next);
                let _ = writeln!(out, "  n{id} -> n{child} [label=\"{}\"];", e.label);
            }
        }
    }
    id
}
