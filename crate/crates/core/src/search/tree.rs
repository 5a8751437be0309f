use std::collections::BTreeSet;

use crate::symbol::Symbol;

/// One `(P[lo..hi], bound)` query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryNode {
    pub lo: usize,
    pub hi: usize,
    pub bound: u32,
    pub children: Option<(usize, usize)>,
    pub parent: Option<usize>,
}

impl QueryNode {
    pub fn len(&self) -> usize {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("pattern of length {len} cannot be split into {parts} nonempty parts")]
pub struct PatternTooShort {
    pub len: usize,
    pub parts: usize,
}

/// Balanced binary tree over `b + 1` pattern pieces, stored in preorder
/// (node 0 is the root).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryTree {
    nodes: Vec<QueryNode>,
}

impl QueryTree {
    pub const ROOT: usize = 0;

    pub fn nodes(&self) -> &[QueryNode] {
        &self.nodes
    }

    pub fn node(&self, n: usize) -> &QueryNode {
        &self.nodes[n]
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&n| self.nodes[n].is_leaf()).collect()
    }

    /// Whether `n` is the left child of its parent.
    pub fn is_left_child(&self, n: usize) -> bool {
        match self.nodes[n].parent {
            Some(p) => self.nodes[p].children.unwrap().0 == n,
            None => false,
        }
    }

    /// `(substring, bound)` per node in preorder.
    pub fn labels(&self, pattern: &[Symbol]) -> Vec<(Vec<Symbol>, u32)> {
        self.nodes
            .iter()
            .map(|n| (pattern[n.lo..n.hi].to_vec(), n.bound))
            .collect()
    }
}

/// Splits a pattern of length `len` for bound `b`. Parts have length
/// `len / (b + 1)`, the last `len % (b + 1)` of them one more; a node with
/// `L` leaves puts `ceil(L / 2)` of them on the left.
pub fn build_query_tree(len: usize, b: u32) -> Result<QueryTree, PatternTooShort> {
    let parts = b as usize + 1;
    if len < parts {
        return Err(PatternTooShort { len, parts });
    }
    let base = len / parts;
    let longer = len % parts;
    let mut bounds = Vec::with_capacity(parts + 1);
    bounds.push(0);
    for k in 0..parts {
        let l = if k >= parts - longer { base + 1 } else { base };
        bounds.push(bounds[k] + l);
    }
    let mut nodes = Vec::with_capacity(2 * parts - 1);
    grow(&mut nodes, &bounds, 0, parts, None);
    Ok(QueryTree { nodes })
}

fn grow(nodes: &mut Vec<QueryNode>, bounds: &[usize], first: usize, last: usize, parent: Option<usize>) -> usize {
    let id = nodes.len();
    let leaves = last - first;
    nodes.push(QueryNode {
        lo: bounds[first],
        hi: bounds[last],
        bound: leaves as u32 - 1,
        children: None,
        parent,
    });
    if leaves > 1 {
        let mid = first + leaves.div_ceil(2);
        let l = grow(nodes, bounds, first, mid, Some(id));
        let r = grow(nodes, bounds, mid, last, Some(id));
        nodes[id].children = Some((l, r));
    }
    id
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("cannot trim {i} + {j} symbols from a string of length {len}")]
pub struct ReductError {
    pub i: usize,
    pub j: usize,
    pub len: usize,
}

/// `u` without its first `i` and last `j` symbols.
pub fn reduct(i: usize, u: &[Symbol], j: usize) -> Result<&[Symbol], ReductError> {
    if i + j > u.len() {
        return Err(ReductError { i, j, len: u.len() });
    }
    Ok(&u[i..u.len() - j])
}

/// Query on `r(i, P', j)` for the node's substring `P'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DerivedQuery {
    pub node: usize,
    pub i: usize,
    pub j: usize,
}

impl DerivedQuery {
    /// Pattern range of the reduct.
    pub fn range(&self, tree: &QueryTree) -> (usize, usize) {
        let n = tree.node(self.node);
        (n.lo + self.i, n.hi - self.j)
    }

    /// Whether the split between the node's children falls inside the
    /// reduct. When it does not (only possible for widths of three or
    /// more) the children say nothing about this query.
    pub fn splits(&self, tree: &QueryTree) -> bool {
        let n = tree.node(self.node);
        match n.children {
            None => true,
            Some((l, _)) => {
                let m = tree.node(l).hi;
                let (lo, hi) = self.range(tree);
                lo <= m && m <= hi
            }
        }
    }
}

/// Derived queries actually needed to answer the root, top down: the root
/// asks for `(0, 0)`; a left child keeps its parent's `i` and takes every
/// `j < omega`, a right child keeps `j` and takes every `i < omega`.
pub fn derived_queries(tree: &QueryTree, omega: usize) -> Vec<DerivedQuery> {
    let mut demand: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new(); tree.nodes().len()];
    demand[QueryTree::ROOT].insert((0, 0));
    // preorder: parents come before children
    for n in 0..tree.nodes().len() {
        let Some((l, r)) = tree.node(n).children else { continue };
        let m = tree.node(l).hi;
        let wanted: Vec<(usize, usize)> = demand[n].iter().copied().collect();
        for (i, j) in wanted {
            let dq = DerivedQuery { node: n, i, j };
            if !dq.splits(tree) {
                continue;
            }
            let (lo, hi) = dq.range(tree);
            for k in 0..omega {
                if lo + k <= m {
                    demand[l].insert((i, k));
                }
                if m + k <= hi {
                    demand[r].insert((k, j));
                }
            }
        }
    }
    demand
        .into_iter()
        .enumerate()
        .flat_map(|(node, set)| set.into_iter().map(move |(i, j)| DerivedQuery { node, i, j }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{render, symbols};

    #[test]
    fn dread_tree() {
        let p = symbols("dread");
        let t = build_query_tree(p.len(), 2).unwrap();
        let labels: Vec<(String, u32)> = t.labels(&p).into_iter().map(|(s, b)| (render(&s, false), b)).collect();
        let want = [("dread", 2), ("dre", 1), ("d", 0), ("re", 0), ("ad", 0)];
        assert_eq!(labels, want.map(|(s, b)| (s.to_string(), b)));
        assert_eq!(t.leaves(), vec![2, 3, 4]);
    }

    #[test]
    fn single_leaf() {
        let t = build_query_tree(3, 0).unwrap();
        assert_eq!(t.nodes().len(), 1);
        assert!(t.node(0).is_leaf());
        assert_eq!(build_query_tree(2, 2), Err(PatternTooShort { len: 2, parts: 3 }));
    }

    #[test]
    fn reducts() {
        let u = symbols("dread");
        assert_eq!(reduct(0, &u, 0).unwrap(), &u[..]);
        assert_eq!(render(reduct(1, &u, 1).unwrap(), false), "rea");
        assert!(reduct(3, &u, 3).is_err());
    }

    #[test]
    fn demands() {
        let t = build_query_tree(5, 2).unwrap();
        let one = derived_queries(&t, 1);
        assert_eq!(one.len(), 5);
        assert!(one.iter().all(|d| d.i == 0 && d.j == 0));
        let two = derived_queries(&t, 2);
        let at = |n: usize| {
            two.iter()
                .filter(|d| d.node == n)
                .map(|d| (d.i, d.j))
                .collect::<Vec<_>>()
        };
        assert_eq!(at(0), vec![(0, 0)]);
        assert_eq!(at(1), vec![(0, 0), (0, 1)]);
        assert_eq!(at(4), vec![(0, 0), (1, 0)]);
    }
}
