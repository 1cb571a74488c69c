//! Cross-ratio floor diagrams of degree Δ_d and the conditions they satisfy.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crcount_core::{DegCrossRatio, EndRef};

/// Type of a half-edge of a floor diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfEdge {
    /// Leads to a component that is fixed by its conditions.
    Thin,
    /// Leads to a component that keeps a degree of freedom.
    Thick,
}

impl HalfEdge {
    pub fn opposite(self) -> HalfEdge {
        match self {
            HalfEdge::Thin => HalfEdge::Thick,
            HalfEdge::Thick => HalfEdge::Thin,
        }
    }
}

/// A floor: the contraction of the component of one marked point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramVertex {
    /// Number of ends of direction (1,1) on the floor.
    pub size: u64,
    /// Number of cross-ratios satisfied at the floor.
    pub lambda_count: usize,
    /// Degree labels of the ends attached to the floor.
    pub labels: BTreeSet<usize>,
}

/// An elevator between two floors, directed from the smaller to the larger
/// vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub source: usize,
    pub target: usize,
    pub weight: u64,
    pub source_mark: HalfEdge,
    pub target_mark: HalfEdge,
}

impl DiagramEdge {
    /// The mark of the half-edge at `v`.
    pub fn mark_at(&self, v: usize) -> HalfEdge {
        if v == self.source {
            self.source_mark
        } else {
            self.target_mark
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.source {
            self.target
        } else {
            self.source
        }
    }

    /// `+weight` at the source and `-weight` at the target.
    pub fn signed_weight_at(&self, v: usize) -> i64 {
        if v == self.source {
            self.weight as i64
        } else {
            -(self.weight as i64)
        }
    }
}

/// A cross-ratio floor diagram of degree Δ_d on the vertices `v_1..v_n`
/// (stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossRatioFloorDiagram {
    pub d: u64,
    pub vertices: Vec<DiagramVertex>,
    pub edges: Vec<DiagramEdge>,
}

/// The first invariant a diagram violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramViolation {
    #[error("the diagram has no vertices")]
    Empty,
    #[error("the diagram has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u64, found: u64 },
    #[error("edge {edge} has an endpoint out of range or is not directed to the larger vertex")]
    BadEndpoints { edge: usize },
    #[error("edge {edge} has weight zero")]
    ZeroWeight { edge: usize },
    #[error("edge {edge} does not pair a thin with a thick half-edge")]
    Marks { edge: usize },
    #[error("the underlying graph is not a tree")]
    NotATree,
    #[error("label {label} is not a label of the degree")]
    UnknownLabel { label: usize },
    #[error("label {label} appears at more than one vertex")]
    RepeatedLabel { label: usize },
    #[error("label {label} appears at no vertex")]
    MissingLabel { label: usize },
    #[error("vertex {vertex} has size {size} but {bottom} bottom and {diagonal} diagonal labels")]
    Size {
        vertex: usize,
        size: u64,
        bottom: u64,
        diagonal: u64,
    },
    #[error("vertex {vertex} needs {expected} thick half-edges and left ends, found {found}")]
    ThickCount {
        vertex: usize,
        expected: i64,
        found: i64,
    },
    #[error("vertex {vertex} is not balanced (excess {excess})")]
    Unbalanced { vertex: usize, excess: i64 },
}

/// Which of the three direction classes of Δ_d a label belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelClass {
    Left,
    Bottom,
    Diagonal,
}

/// Classifies a label of Δ_d: `1..=d` left, `d+1..=2d` bottom,
/// `2d+1..=3d` diagonal.
pub fn label_class(d: u64, label: usize) -> Option<LabelClass> {
    let (d, t) = (d as usize, label);
    match t {
        _ if t >= 1 && t <= d => Some(LabelClass::Left),
        _ if t > d && t <= 2 * d => Some(LabelClass::Bottom),
        _ if t > 2 * d && t <= 3 * d => Some(LabelClass::Diagonal),
        _ => None,
    }
}

impl CrossRatioFloorDiagram {
    /// The same diagram with edges sorted by their endpoints.
    pub fn normalized(&self) -> CrossRatioFloorDiagram {
        let mut out = self.clone();
        out.edges.sort_by_key(|e| (e.source, e.target));
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edges at `v` as indices into `edges`.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.source == v || e.target == v)
            .map(|(i, _)| i)
    }

    /// Number of left ends at `v`.
    pub fn left_ends(&self, v: usize) -> u64 {
        self.vertices[v]
            .labels
            .iter()
            .filter(|&&t| label_class(self.d, t) == Some(LabelClass::Left))
            .count() as u64
    }

    fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        adj
    }

    /// Vertices on the path from `a` to `b`, both included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let adj = self.neighbors();
        let mut prev = vec![usize::MAX; self.vertices.len()];
        prev[a] = a;
        let mut stack = vec![a];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut out = vec![b];
        let mut x = b;
        while x != a {
            x = prev[x];
            out.push(x);
        }
        out.reverse();
        out
    }

    /// The vertex a reference of a cross-ratio is associated with: `v_j`
    /// for the point `x_j`, the vertex carrying the label for an end.
    pub fn vertex_of(&self, r: EndRef) -> Option<usize> {
        match r {
            EndRef::MarkedPoint(j) => (j >= 1 && j <= self.vertices.len()).then(|| j - 1),
            EndRef::EndLabel(t) => self.vertices.iter().position(|v| v.labels.contains(&t)),
        }
    }

    /// Checks every invariant of a cross-ratio floor diagram.
    pub fn validate(&self) -> Result<(), DiagramViolation> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(DiagramViolation::Empty);
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.source >= e.target || e.target >= n {
                return Err(DiagramViolation::BadEndpoints { edge: i });
            }
            if e.weight == 0 {
                return Err(DiagramViolation::ZeroWeight { edge: i });
            }
            if e.source_mark == e.target_mark {
                return Err(DiagramViolation::Marks { edge: i });
            }
        }
        if self.edges.len() + 1 != n || !self.is_connected() {
            return Err(DiagramViolation::NotATree);
        }
        let d = self.d;
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            for &t in &v.labels {
                if label_class(d, t).is_none() {
                    return Err(DiagramViolation::UnknownLabel { label: t });
                }
                if !seen.insert(t) {
                    return Err(DiagramViolation::RepeatedLabel { label: t });
                }
            }
        }
        if let Some(t) = (1..=3 * d as usize).find(|t| !seen.contains(t)) {
            return Err(DiagramViolation::MissingLabel { label: t });
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let count = |c| v.labels.iter().filter(|&&t| label_class(d, t) == Some(c)).count() as u64;
            let (bottom, diagonal) = (count(LabelClass::Bottom), count(LabelClass::Diagonal));
            if bottom != v.size || diagonal != v.size {
                return Err(DiagramViolation::Size {
                    vertex: i,
                    size: v.size,
                    bottom,
                    diagonal,
                });
            }
            let left = count(LabelClass::Left) as i64;
            let thick = self
                .incident(i)
                .filter(|&e| self.edges[e].mark_at(i) == HalfEdge::Thick)
                .count() as i64;
            let expected = 2 - 2 * v.size as i64 + v.lambda_count as i64;
            if thick + left != expected {
                return Err(DiagramViolation::ThickCount {
                    vertex: i,
                    expected,
                    found: thick + left,
                });
            }
            let excess = v.size as i64 - left + self.incident(i).map(|e| self.edges[e].signed_weight_at(i)).sum::<i64>();
            if excess != 0 {
                return Err(DiagramViolation::Unbalanced { vertex: i, excess });
            }
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let adj = self.neighbors();
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertices.len()
    }

    /// The vertex at which `lambda` is satisfied: for every way of
    /// splitting its four references into two pairs, the two connecting
    /// paths meet in exactly this vertex.
    pub fn satisfies(&self, lambda: &DegCrossRatio) -> Option<usize> {
        let verts: Vec<usize> = lambda
            .refs()
            .iter()
            .map(|&r| self.vertex_of(r))
            .collect::<Option<_>>()?;
        let mut at = None;
        for [a, b, c, e] in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]] {
            let first: BTreeSet<usize> = self.path(verts[a], verts[b]).into_iter().collect();
            let common: Vec<usize> = self
                .path(verts[c], verts[e])
                .into_iter()
                .filter(|v| first.contains(v))
                .collect();
            match (common.as_slice(), at) {
                ([v], None) => at = Some(*v),
                ([v], Some(w)) if *v == w => {}
                _ => return None,
            }
        }
        at
    }

    /// Whether every cross-ratio is satisfied somewhere and each vertex
    /// records exactly the number satisfied at it.
    pub fn satisfies_all(&self, lambdas: &[DegCrossRatio]) -> bool {
        let mut counts = vec![0; self.vertices.len()];
        for l in lambdas {
            match self.satisfies(l) {
                Some(v) => counts[v] += 1,
                None => return false,
            }
        }
        counts
            .iter()
            .zip(&self.vertices)
            .all(|(&c, v)| c == v.lambda_count)
    }
}

/// Whether `diagram` is a valid cross-ratio floor diagram of degree Δ_d.
pub fn validate_diagram(diagram: &CrossRatioFloorDiagram, d: u64) -> Result<(), DiagramViolation> {
    if diagram.d != d {
        return Err(DiagramViolation::DegreeMismatch {
            expected: d,
            found: diagram.d,
        });
    }
    diagram.validate()
}

impl fmt::Display for CrossRatioFloorDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            let labels: Vec<String> = v.labels.iter().map(usize::to_string).collect();
            writeln!(
                f,
                "v{}: s={} |λ|={} δ={{{}}}",
                i + 1,
                v.size,
                v.lambda_count,
                labels.join(",")
            )?;
        }
        for e in &self.edges {
            let mark = |m| match m {
                HalfEdge::Thin => "thin",
                HalfEdge::Thick => "thick",
            };
            writeln!(
                f,
                "v{} ({}) -> v{} ({}) ω={}",
                e.source + 1,
                mark(e.source_mark),
                e.target + 1,
                mark(e.target_mark),
                e.weight
            )?;
        }
        Ok(())
    }
}
