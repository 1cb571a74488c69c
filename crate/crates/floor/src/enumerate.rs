//! Enumeration of the cross-ratio floor diagrams satisfying given
//! degenerated cross-ratios.
//!
//! Diagrams are generated up to the choice of end labels: for each tree
//! on the ordered vertices the satisfied cross-ratios are determined by
//! the tree alone, and the sizes and numbers of left ends are chosen
//! vertex by vertex towards a root. Balancing then forces the weight of
//! the edge to the parent, and the thick count forces its marks.

use std::collections::BTreeSet;

use crcount_core::{DegCrossRatio, EndRef};

use crate::diagram::{CrossRatioFloorDiagram, DiagramEdge, DiagramVertex, HalfEdge};
use crate::FloorError;

/// A diagram with canonically assigned labels, standing for all diagrams
/// that differ from it only by a relabeling of ends within each direction
/// class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramClass {
    pub diagram: CrossRatioFloorDiagram,
    /// Number of diagrams in the class.
    pub labelings: u64,
}

/// Checks the hypotheses of the floor-diagram count.
pub(crate) fn check_problem(d: u64, n: usize, lambdas: &[DegCrossRatio]) -> Result<(), FloorError> {
    if d == 0 {
        return Err(FloorError::ZeroDegree);
    }
    for l in lambdas {
        for r in l.refs() {
            match r {
                EndRef::MarkedPoint(j) if j == 0 || j > n => return Err(FloorError::UnresolvedRef(r)),
                EndRef::EndLabel(t) if t == 0 || t > 3 * d as usize => return Err(FloorError::UnresolvedRef(r)),
                _ => {}
            }
        }
        if l.point_count() != 4 {
            return Err(FloorError::NotFourPoint);
        }
    }
    if n + lambdas.len() + 1 != 3 * d as usize {
        return Err(FloorError::ConditionCountMismatch {
            d,
            points: n,
            lambdas: lambdas.len(),
        });
    }
    Ok(())
}

/// All diagram classes of degree Δ_d on `n` vertices satisfying `lambdas`.
pub fn enumerate_diagrams(d: u64, n: usize, lambdas: &[DegCrossRatio]) -> Result<Vec<DiagramClass>, FloorError> {
    check_problem(d, n, lambdas)?;
    let mut out = Vec::new();
    for tree in LabeledTrees::new(n) {
        let skeleton = skeleton(d, n, &tree);
        let Some(lambda_counts) = lambda_counts(&skeleton, lambdas) else {
            continue;
        };
        let mut search = Search::new(d, n, &tree, lambda_counts);
        search.run(0, d, d, &mut out)?;
    }
    Ok(out)
}

fn skeleton(d: u64, n: usize, tree: &[(usize, usize)]) -> CrossRatioFloorDiagram {
    CrossRatioFloorDiagram {
        d,
        vertices: vec![
            DiagramVertex {
                size: 0,
                lambda_count: 0,
                labels: BTreeSet::new(),
            };
            n
        ],
        edges: tree
            .iter()
            .map(|&(a, b)| DiagramEdge {
                source: a,
                target: b,
                weight: 1,
                source_mark: HalfEdge::Thin,
                target_mark: HalfEdge::Thick,
            })
            .collect(),
    }
}

fn lambda_counts(skeleton: &CrossRatioFloorDiagram, lambdas: &[DegCrossRatio]) -> Option<Vec<usize>> {
    let mut counts = vec![0; skeleton.vertex_count()];
    for l in lambdas {
        counts[skeleton.satisfies(l)?] += 1;
    }
    Some(counts)
}

/// Labeled trees on `0..n` decoded from Prüfer sequences, each edge
/// stored as `(smaller, larger)`.
struct LabeledTrees {
    n: usize,
    code: Vec<usize>,
    done: bool,
}

impl LabeledTrees {
    fn new(n: usize) -> Self {
        LabeledTrees {
            n,
            code: vec![0; n.saturating_sub(2)],
            done: n == 0,
        }
    }

    fn decode(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        if n == 1 {
            return Vec::new();
        }
        let mut degree = vec![1; n];
        for &c in &self.code {
            degree[c] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &c in &self.code {
            let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf remains");
            edges.push((leaf.min(c), leaf.max(c)));
            degree[leaf] -= 1;
            degree[c] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges
    }
}

impl Iterator for LabeledTrees {
    type Item = Vec<(usize, usize)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let tree = self.decode();
        self.done = true;
        for k in (0..self.code.len()).rev() {
            if self.code[k] + 1 < self.n {
                self.code[k] += 1;
                self.done = false;
                break;
            }
            self.code[k] = 0;
        }
        Some(tree)
    }
}

/// Backtracking over sizes and left-end counts in post-order from vertex 0.
struct Search<'a> {
    d: u64,
    tree: &'a [(usize, usize)],
    lambda_counts: Vec<usize>,
    order: Vec<usize>,
    parent_edge: Vec<Option<usize>>,
    child_edges: Vec<Vec<usize>>,
    size: Vec<u64>,
    left: Vec<u64>,
    weight: Vec<i64>,
    thick_end: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(d: u64, n: usize, tree: &'a [(usize, usize)], lambda_counts: Vec<usize>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (i, &(a, b)) in tree.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        let mut parent_edge = vec![None; n];
        let mut child_edges = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut preorder = Vec::with_capacity(n);
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            preorder.push(u);
            for &(w, e) in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent_edge[w] = Some(e);
                    child_edges[u].push(e);
                    stack.push(w);
                }
            }
        }
        preorder.reverse();
        Search {
            d,
            tree,
            lambda_counts,
            order: preorder,
            parent_edge,
            child_edges,
            size: vec![0; n],
            left: vec![0; n],
            weight: vec![0; tree.len()],
            thick_end: vec![0; tree.len()],
        }
    }

    fn signed_at(&self, e: usize, v: usize) -> i64 {
        if self.tree[e].0 == v {
            self.weight[e]
        } else {
            -self.weight[e]
        }
    }

    fn run(&mut self, k: usize, rem_size: u64, rem_left: u64, out: &mut Vec<DiagramClass>) -> Result<(), FloorError> {
        let v = self.order[k];
        let is_root = k + 1 == self.order.len();
        let lambda = self.lambda_counts[v] as i64;
        let child_flow: i64 = self.child_edges[v].iter().map(|&e| self.signed_at(e, v)).sum();
        let thick_from_children = self.child_edges[v]
            .iter()
            .filter(|&&e| self.thick_end[e] == v)
            .count() as i64;
        for s in 0..=rem_size {
            for l in 0..=rem_left {
                if is_root && (s != rem_size || l != rem_left) {
                    continue;
                }
                let thick = 2 - 2 * s as i64 + lambda - l as i64;
                let rest = thick - thick_from_children;
                let flow = s as i64 - l as i64 + child_flow;
                self.size[v] = s;
                self.left[v] = l;
                match self.parent_edge[v] {
                    None => {
                        if rest == 0 && flow == 0 {
                            out.push(self.emit()?);
                        }
                    }
                    Some(p) => {
                        let sign = if self.tree[p].0 == v { 1 } else { -1 };
                        let w = -flow * sign;
                        if w < 1 || !(0..=1).contains(&rest) {
                            continue;
                        }
                        self.weight[p] = w;
                        self.thick_end[p] = if rest == 1 {
                            v
                        } else if self.tree[p].0 == v {
                            self.tree[p].1
                        } else {
                            self.tree[p].0
                        };
                        self.run(k + 1, rem_size - s, rem_left - l, out)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn emit(&self) -> Result<DiagramClass, FloorError> {
        let d = self.d as usize;
        let n = self.size.len();
        let (mut next_left, mut next_bottom, mut next_diagonal) = (1, d + 1, 2 * d + 1);
        let mut vertices = Vec::with_capacity(n);
        for v in 0..n {
            let mut labels = BTreeSet::new();
            for _ in 0..self.left[v] {
                labels.insert(next_left);
                next_left += 1;
            }
            for _ in 0..self.size[v] {
                labels.insert(next_bottom);
                labels.insert(next_diagonal);
                next_bottom += 1;
                next_diagonal += 1;
            }
            vertices.push(DiagramVertex {
                size: self.size[v],
                lambda_count: self.lambda_counts[v],
                labels,
            });
        }
        let mut edges: Vec<DiagramEdge> = self
            .tree
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| {
                let thick_at_source = self.thick_end[e] == a;
                DiagramEdge {
                    source: a,
                    target: b,
                    weight: self.weight[e] as u64,
                    source_mark: if thick_at_source { HalfEdge::Thick } else { HalfEdge::Thin },
                    target_mark: if thick_at_source { HalfEdge::Thin } else { HalfEdge::Thick },
                }
            })
            .collect();
        edges.sort_by_key(|e| (e.source, e.target));
        let factorial = |k: u64| (1..=k).try_fold(1u64, |acc, x| acc.checked_mul(x));
        let multinomial = |parts: &[u64]| -> Option<u64> {
            let mut value = factorial(self.d)?;
            for &p in parts {
                value /= factorial(p)?;
            }
            Some(value)
        };
        let labelings = (|| {
            let sizes = multinomial(&self.size)?;
            multinomial(&self.left)?.checked_mul(sizes)?.checked_mul(sizes)
        })()
        .ok_or(FloorError::Overflow)?;
        Ok(DiagramClass {
            diagram: CrossRatioFloorDiagram {
                d: self.d,
                vertices,
                edges,
            },
            labelings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prufer_codes_give_cayley_many_distinct_trees() {
        for n in 1..=6 {
            let trees: BTreeSet<Vec<(usize, usize)>> = LabeledTrees::new(n)
                .map(|mut t| {
                    t.sort_unstable();
                    t
                })
                .collect();
            let expected = if n == 1 { 1 } else { n.pow(n as u32 - 2) };
            assert_eq!(trees.len(), expected);
        }
    }

    #[test]
    fn lines_through_two_points() {
        let classes = enumerate_diagrams(1, 2, &[]).unwrap();
        assert_eq!(classes.len(), 1);
        let c = &classes[0];
        assert_eq!(c.labelings, 1);
        c.diagram.validate().unwrap();
    }

    #[test]
    fn every_enumerated_diagram_is_valid() {
        let lambda = DegCrossRatio::new([1, 2, 3, 4].map(EndRef::MarkedPoint)).unwrap();
        for (d, n, lambdas) in [(2, 5, vec![]), (2, 4, vec![lambda]), (3, 7, vec![lambda])] {
            for c in enumerate_diagrams(d, n, &lambdas).unwrap() {
                c.diagram.validate().unwrap();
                assert!(c.diagram.satisfies_all(&lambdas));
            }
        }
    }

    #[test]
    fn rejects_cross_ratios_with_ends() {
        let lambda = DegCrossRatio::new([
            EndRef::MarkedPoint(1),
            EndRef::MarkedPoint(2),
            EndRef::MarkedPoint(3),
            EndRef::EndLabel(1),
        ])
        .unwrap();
        let err = enumerate_diagrams(2, 4, &[lambda]).unwrap_err();
        assert_eq!(err.to_string(), "floor diagrams require 4-point cross-ratios");
    }
}
