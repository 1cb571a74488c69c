//! Leaf-labeled trees: the abstract graphs underlying rational stable maps.

use std::ops::Range;

use crate::error::CoreError;

/// Bitmask of leaves.
pub type LeafMask = u64;

/// A finite tree whose leaves `0..leaf_count` are the ends of a curve and
/// whose remaining nodes `leaf_count..node_count` are vertices of valence
/// at least three.
///
/// Every edge `(a, b)` incident to a leaf is stored with the leaf as `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTree {
    leaf_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    far_masks: Vec<LeafMask>,
}

impl MarkedTree {
    /// Validates and indexes a tree given by its edge list.
    pub fn from_edges(
        leaf_count: usize,
        node_count: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, CoreError> {
        if leaf_count > 64 {
            return Err(CoreError::TooManyLeaves(leaf_count));
        }
        if leaf_count < 2 || node_count <= leaf_count {
            return Err(CoreError::InvalidTree(
                "need at least two leaves and one vertex".into(),
            ));
        }
        if edges.len() + 1 != node_count {
            return Err(CoreError::InvalidTree(format!(
                "{} edges on {} nodes cannot form a tree",
                edges.len(),
                node_count
            )));
        }
        let mut edges = edges;
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, edge) in edges.iter_mut().enumerate() {
            let (a, b) = *edge;
            if a >= node_count || b >= node_count || a == b {
                return Err(CoreError::InvalidTree(format!("bad edge ({a},{b})")));
            }
            if a < leaf_count && b >= leaf_count {
                *edge = (b, a);
            }
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
        }
        for (node, adj) in adjacency.iter().enumerate() {
            let ok = if node < leaf_count {
                adj.len() == 1 && adj[0].0 >= leaf_count
            } else {
                adj.len() >= 3
            };
            if !ok {
                return Err(CoreError::InvalidTree(format!(
                    "node {node} has invalid valence {}",
                    adj.len()
                )));
            }
        }
        let mut tree = MarkedTree {
            leaf_count,
            edges,
            adjacency,
            far_masks: Vec::new(),
        };
        tree.far_masks = tree.compute_far_masks()?;
        Ok(tree)
    }

    fn compute_far_masks(&self) -> Result<Vec<LeafMask>, CoreError> {
        let n = self.node_count();
        let root = self.leaf_count;
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        parent[root] = root;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &(w, _) in &self.adjacency[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(CoreError::InvalidTree("tree is disconnected".into()));
        }
        let mut subtree = vec![0 as LeafMask; n];
        for &u in order.iter().rev() {
            if u < self.leaf_count {
                subtree[u] |= 1 << u;
            }
            if u != root {
                let m = subtree[u];
                subtree[parent[u]] |= m;
            }
        }
        let full = self.all_leaves();
        Ok(self
            .edges
            .iter()
            .map(|&(a, b)| {
                if parent[b] == a {
                    subtree[b]
                } else {
                    full & !subtree[a]
                }
            })
            .collect())
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn vertices(&self) -> Range<usize> {
        self.leaf_count..self.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_bounded(&self, e: usize) -> bool {
        self.edges[e].1 >= self.leaf_count
    }

    pub fn bounded_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| self.is_bounded(e))
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn valence(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// The edge incident to a leaf.
    pub fn end_edge(&self, leaf: usize) -> usize {
        self.adjacency[leaf][0].1
    }

    /// The vertex a leaf hangs off.
    pub fn base_vertex(&self, leaf: usize) -> usize {
        self.adjacency[leaf][0].0
    }

    pub fn all_leaves(&self) -> LeafMask {
        if self.leaf_count == 64 {
            LeafMask::MAX
        } else {
            (1 << self.leaf_count) - 1
        }
    }

    /// Leaves on the side of edge `e` that contains `node`'s neighbor
    /// across `e`, i.e. the leaves reached by leaving `from` through `e`.
    pub fn far_side(&self, e: usize, from: usize) -> LeafMask {
        let (a, b) = self.edges[e];
        if from == a {
            self.far_masks[e]
        } else {
            debug_assert_eq!(from, b);
            self.all_leaves() & !self.far_masks[e]
        }
    }

    /// The leaf set of `e`'s split normalized to exclude leaf 0.
    pub fn split(&self, e: usize) -> LeafMask {
        let m = self.far_masks[e];
        if m & 1 == 1 {
            self.all_leaves() & !m
        } else {
            m
        }
    }

    /// For each edge at `v`: the edge, the neighbor, and the leaves beyond.
    pub fn branches(&self, v: usize) -> impl Iterator<Item = (usize, usize, LeafMask)> + '_ {
        self.adjacency[v]
            .iter()
            .map(move |&(w, e)| (e, w, self.far_side(e, v)))
    }

    /// Sorted normalized splits of the bounded edges; two trees on the same
    /// leaves are isomorphic relative to the leaves iff these agree.
    pub fn canonical_splits(&self) -> Vec<LeafMask> {
        let mut s: Vec<LeafMask> = self.bounded_edges().map(|e| self.split(e)).collect();
        s.sort_unstable();
        s
    }

    /// Edges on the path between two nodes, in order from `u`.
    pub fn path(&self, u: usize, w: usize) -> Vec<usize> {
        let mut prev = vec![(usize::MAX, usize::MAX); self.node_count()];
        let mut queue = std::collections::VecDeque::from([u]);
        prev[u] = (u, usize::MAX);
        while let Some(x) = queue.pop_front() {
            if x == w {
                break;
            }
            for &(y, e) in &self.adjacency[x] {
                if prev[y].0 == usize::MAX {
                    prev[y] = (x, e);
                    queue.push_back(y);
                }
            }
        }
        let mut out = Vec::new();
        let mut x = w;
        while x != u {
            let (p, e) = prev[x];
            out.push(e);
            x = p;
        }
        out.reverse();
        out
    }

    /// Whether every vertex is trivalent.
    pub fn is_trivalent(&self) -> bool {
        self.vertices().all(|v| self.valence(v) == 3)
    }
}

/// Leaf indices set in a mask, ascending.
pub fn mask_leaves(mask: LeafMask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caterpillar() -> MarkedTree {
        MarkedTree::from_edges(4, 6, vec![(4, 0), (4, 1), (4, 5), (5, 2), (5, 3)]).unwrap()
    }

    #[test]
    fn far_sides_and_splits() {
        let t = caterpillar();
        assert_eq!(t.far_side(2, 4), 0b1100);
        assert_eq!(t.far_side(2, 5), 0b0011);
        assert_eq!(t.split(2), 0b1100);
        assert_eq!(t.canonical_splits(), vec![0b1100]);
        assert_eq!(t.bounded_edges().collect::<Vec<_>>(), vec![2]);
        assert_eq!(t.base_vertex(3), 5);
    }

    #[test]
    fn paths_between_leaves() {
        let t = caterpillar();
        assert_eq!(t.path(0, 3), vec![0, 2, 4]);
        assert_eq!(t.path(0, 1), vec![0, 1]);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(MarkedTree::from_edges(3, 4, vec![(3, 0), (3, 1)]).is_err());
        assert!(MarkedTree::from_edges(4, 5, vec![(4, 0), (4, 1), (4, 2), (0, 3)]).is_err());
    }

    #[test]
    fn leaves_are_normalized_to_second_position() {
        let t = MarkedTree::from_edges(3, 4, vec![(0, 3), (3, 1), (2, 3)]).unwrap();
        assert!(t.edges().iter().all(|&(a, b)| a == 3 && b < 3));
        assert_eq!(mask_leaves(0b1011).collect::<Vec<_>>(), vec![0, 1, 3]);
    }
}
