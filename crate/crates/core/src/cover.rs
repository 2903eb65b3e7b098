//! Minimum node cover of the hypergraph `G(S)`: nodes `A(S)`, one edge
//! `A(r)` per rule of positive length.

use crate::error::{Error, Result};
use crate::rule::AttrId;
use crate::system::RuleSystem;

/// Attributes are packed into a `u64` mask.
pub const MAX_COVER_ATTRS: usize = 64;

/// `β(S)`.
pub fn node_cover_number(system: &RuleSystem) -> Result<usize> {
    min_node_cover(system).map(|c| c.len())
}

/// A minimum node cover, ascending.
pub fn min_node_cover(system: &RuleSystem) -> Result<Vec<AttrId>> {
    let attrs = &system.profile().attrs;
    if attrs.len() > MAX_COVER_ATTRS {
        return Err(Error::SizeCap {
            what: "attribute count",
            cap: MAX_COVER_ATTRS,
        });
    }
    let bit = |a: AttrId| 1u64 << attrs.binary_search(&a).expect("attribute of A(S)");
    let mut edges: Vec<u64> = system
        .rules()
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| r.attrs().map(bit).fold(0, |m, b| m | b))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    // supersets of another edge are covered whenever that edge is
    let edges: Vec<u64> = edges
        .iter()
        .copied()
        .filter(|&e| !edges.iter().any(|&f| f != e && f & e == f))
        .collect();

    let n = attrs.len();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (mut best, mut best_size) = if edges.is_empty() { (0, 0) } else { (full, n) };
    branch(&edges, 0, &mut best, &mut best_size);
    Ok(attrs
        .iter()
        .enumerate()
        .filter(|&(i, _)| best & (1 << i) != 0)
        .map(|(_, &a)| a)
        .collect())
}

fn branch(edges: &[u64], chosen: u64, best: &mut u64, best_size: &mut usize) {
    let size = chosen.count_ones() as usize;
    if size >= *best_size {
        return;
    }
    let uncovered = edges.iter().copied().filter(|&e| e & chosen == 0);
    let Some(edge) = uncovered.clone().min_by_key(|e| e.count_ones()) else {
        *best = chosen;
        *best_size = size;
        return;
    };
    // Each uncovered edge needs its own node unless it shares one with another,
    // so a packing of pairwise disjoint uncovered edges bounds the remainder.
    let mut packed = 0u64;
    let mut packing = 0usize;
    for e in uncovered {
        if e & packed == 0 {
            packed |= e;
            packing += 1;
        }
    }
    if size + packing >= *best_size {
        return;
    }
    let mut rest = edge;
    while rest != 0 {
        let b = rest & rest.wrapping_neg();
        rest &= rest - 1;
        branch(edges, chosen | b, best, best_size);
    }
}
