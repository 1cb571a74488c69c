//! Enumeration of leaf-labeled trivalent trees by recursive leaf insertion.

use crcount_core::{IntVec2, MarkedTree};

use crate::OracleError;

/// Compact edge list of a trivalent tree on `N` leaves: leaves are
/// `0..N`, vertices `N..2N-2`, and each edge incident to a leaf stores the
/// leaf second.
pub type EdgeList = Vec<(u8, u8)>;

/// Streams every trivalent tree with leaves `0..N` exactly once.
///
/// Leaf `k >= 3` is inserted into one of the `2k - 3` edges of the tree on
/// leaves `0..k`; the insertion choices are advanced like an odometer.
#[derive(Debug, Clone)]
pub struct TreeIterator {
    leaves: usize,
    choices: Vec<usize>,
    done: bool,
}

/// All trivalent trees with `leaves` labeled leaves.
pub fn enumerate_trivalent_types(leaves: usize) -> Result<TreeIterator, OracleError> {
    if leaves < 3 {
        return Err(OracleError::TooFewLeaves(leaves));
    }
    if leaves > 64 {
        return Err(OracleError::TooLarge(leaves));
    }
    Ok(TreeIterator {
        leaves,
        choices: vec![0; leaves - 3],
        done: false,
    })
}

impl TreeIterator {
    fn build(&self) -> MarkedTree {
        let order: Vec<usize> = (0..self.leaves).collect();
        let mut builder = Builder::star(self.leaves, &order[..3]);
        for (k, &choice) in self.choices.iter().enumerate() {
            builder.insert(choice, order[k + 3]);
        }
        builder.to_tree()
    }

    fn advance(&mut self) {
        for k in (0..self.choices.len()).rev() {
            let limit = 2 * (k + 3) - 3;
            if self.choices[k] + 1 < limit {
                self.choices[k] += 1;
                return;
            }
            self.choices[k] = 0;
        }
        self.done = true;
    }
}

impl Iterator for TreeIterator {
    type Item = MarkedTree;

    fn next(&mut self) -> Option<MarkedTree> {
        if self.done {
            return None;
        }
        let tree = self.build();
        self.advance();
        Some(tree)
    }
}

/// `(2N - 5)!!`, the number of trivalent trees on `N >= 3` labeled leaves.
pub fn trivalent_tree_count(leaves: usize) -> u128 {
    (3..leaves).map(|k| (2 * k - 3) as u128).product()
}

#[derive(Debug, Clone)]
pub(crate) struct Builder {
    pub(crate) leaves: usize,
    pub(crate) edges: EdgeList,
    next: u8,
}

impl Builder {
    pub(crate) fn star(leaves: usize, first: &[usize]) -> Self {
        let c = leaves as u8;
        Builder {
            leaves,
            edges: first.iter().map(|&l| (c, l as u8)).collect(),
            next: c + 1,
        }
    }

    /// Subdivides edge `i` by a new vertex carrying `leaf`.
    pub(crate) fn insert(&mut self, i: usize, leaf: usize) {
        let (u, v) = self.edges[i];
        let w = self.next;
        self.next += 1;
        self.edges[i] = (u, w);
        self.edges.push((w, v));
        self.edges.push((w, leaf as u8));
    }

    pub(crate) fn undo(&mut self, i: usize) {
        self.edges.pop();
        let (_, v) = self.edges.pop().expect("insert before undo");
        self.edges[i].1 = v;
        self.next -= 1;
    }

    pub(crate) fn to_tree(&self) -> MarkedTree {
        edges_to_tree(self.leaves, &self.edges)
    }
}

pub(crate) fn edges_to_tree(leaves: usize, edges: &[(u8, u8)]) -> MarkedTree {
    let edges = edges.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
    MarkedTree::from_edges(leaves, 2 * leaves - 2, edges).expect("insertion builds a trivalent tree")
}

/// Rooted view of an edge list used for fast matrix assembly: for every
/// edge, the leaves beyond it as seen from the vertex of leaf 0.
pub(crate) struct RootedMasks {
    /// `(mask, bounded)` per edge.
    pub(crate) edges: Vec<(u64, bool)>,
}

impl RootedMasks {
    pub(crate) fn new(leaves: usize, edges: &[(u8, u8)]) -> Self {
        let nodes = 2 * leaves - 2;
        let mut adj = vec![[0u8; 3]; nodes];
        let mut deg = vec![0usize; nodes];
        for &(a, b) in edges {
            let (a, b) = (a as usize, b as usize);
            adj[a][deg[a]] = b as u8;
            deg[a] += 1;
            adj[b][deg[b]] = a as u8;
            deg[b] += 1;
        }
        let root = if deg[0] == 1 { adj[0][0] as usize } else { edges[0].0 as usize };
        let mut parent = vec![u8::MAX; nodes];
        let mut order = Vec::with_capacity(nodes);
        let mut stack = vec![root];
        parent[root] = root as u8;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &adj[u][..deg[u]] {
                if parent[w as usize] == u8::MAX {
                    parent[w as usize] = u as u8;
                    stack.push(w as usize);
                }
            }
        }
        let mut sub = vec![0u64; nodes];
        for &u in order.iter().rev() {
            if u < leaves {
                sub[u] |= 1 << u;
            }
            if u != root {
                let m = sub[u];
                sub[parent[u] as usize] |= m;
            }
        }
        let edges = edges
            .iter()
            .map(|&(a, b)| {
                let child = if parent[b as usize] == a { b } else { a };
                (sub[child as usize], (b as usize) >= leaves)
            })
            .collect();
        RootedMasks { edges }
    }
}

pub(crate) fn mask_sum(vectors: &[IntVec2], mask: u64) -> IntVec2 {
    let mut m = mask;
    let mut s = IntVec2::ZERO;
    while m != 0 {
        s += vectors[m.trailing_zeros() as usize];
        m &= m - 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn double_factorial_counts() {
        for (n, expected) in [(3, 1), (4, 3), (5, 15), (6, 105), (7, 945), (8, 10395)] {
            let trees: Vec<_> = enumerate_trivalent_types(n).unwrap().collect();
            assert_eq!(trees.len(), expected);
            assert_eq!(trivalent_tree_count(n), expected as u128);
            let distinct: HashSet<_> = trees.iter().map(|t| t.canonical_splits()).collect();
            assert_eq!(distinct.len(), expected);
            assert!(trees.iter().all(|t| t.is_trivalent()));
        }
    }

    #[test]
    fn too_few_leaves() {
        assert!(enumerate_trivalent_types(2).is_err());
    }

    #[test]
    fn insert_and_undo_restore_the_tree() {
        let mut b = Builder::star(4, &[0, 1, 2]);
        let before = b.edges.clone();
        b.insert(1, 3);
        assert_eq!(b.edges.len(), 5);
        b.undo(1);
        assert_eq!(b.edges, before);
    }
}
