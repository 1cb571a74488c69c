//! Labeled edges, Minkowski labeled polytopes and (non-)pointed segments.

use std::collections::HashMap;

use serde::Serialize;

use crcount_core::{lattice_length, primitive_direction, IntVec2, LatticePolytope};

use crate::theta::{is_theta_increasing, theta_compare};

/// A multiset of positive labels, stored sorted ascending so that two
/// listings of the same multiset compare equal.
pub type Labeling = Vec<u64>;

/// All partitions of `n` into positive parts, each sorted ascending.
/// The empty partition is the only partition of zero.
pub fn partitions(n: u64) -> Vec<Labeling> {
    fn go(rest: u64, min: u64, current: &mut Labeling, out: &mut Vec<Labeling>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for part in min..=rest {
            if rest - part == 0 || rest - part >= part {
                current.push(part);
                go(rest - part, part, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

/// Multiset union of two labelings.
pub fn merge(a: &[u64], b: &[u64]) -> Labeling {
    let mut m: Labeling = a.iter().chain(b).copied().collect();
    m.sort_unstable();
    m
}

/// One edge of a Minkowski labeled polytope, oriented counterclockwise,
/// with its labels split by the summand they are matched to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CellEdge {
    pub start: IntVec2,
    pub end: IntVec2,
    /// Labels matched to the non-segment summand `P̃`.
    pub tilde: Labeling,
    /// Labels matched to segment summands parallel to this edge.
    pub segments: Labeling,
}

impl CellEdge {
    pub fn vector(&self) -> IntVec2 {
        self.end - self.start
    }

    pub fn direction(&self) -> IntVec2 {
        primitive_direction(self.vector()).expect("edges are nondegenerate").0
    }

    pub fn length(&self) -> u64 {
        lattice_length(self.start, self.end)
    }

    /// The full labeling `τ^E`.
    pub fn labeling(&self) -> Labeling {
        merge(&self.tilde, &self.segments)
    }

    /// Primitive outward normal; the direction of the dual curve edges.
    pub fn normal(&self) -> IntVec2 {
        self.direction().rotate_cw()
    }
}

/// A two-dimensional lattice polygon written as the Minkowski sum of a
/// labeled polygon `P̃` (a point or two-dimensional) and labeled segments
/// parallel to edges of `P̃`.
///
/// Vertices run counterclockwise from the `θ`-minimal vertex, so the
/// first `lower` edges form the `θ`-increasing lower chain and the rest
/// the upper chain. A segment summand contributes its label to the two
/// parallel edges of its class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MinkowskiPolytope {
    vertices: Vec<IntVec2>,
    edges: Vec<CellEdge>,
    lower: usize,
}

impl MinkowskiPolytope {
    /// Assembles a polytope from its counterclockwise edges, starting at
    /// any vertex. Returns `None` if the labels do not describe a valid
    /// Minkowski decomposition.
    pub fn new(edges: Vec<CellEdge>) -> Option<Self> {
        let m = edges.len();
        if m < 3 {
            return None;
        }
        for i in 0..m {
            let (e, next) = (&edges[i], &edges[(i + 1) % m]);
            if e.end != next.start || e.vector().det(next.vector()) <= 0 {
                return None;
            }
            if e.tilde.iter().chain(&e.segments).sum::<u64>() != e.length() || e.tilde.contains(&0) {
                return None;
            }
        }
        let start = (0..m)
            .min_by(|&a, &b| theta_compare(edges[a].start, edges[b].start))
            .expect("nonempty");
        let mut edges = edges;
        edges.rotate_left(start);
        let lower = edges.iter().take_while(|e| is_theta_increasing(e.vector())).count();
        let vertices = edges.iter().map(|e| e.start).collect();
        let p = MinkowskiPolytope { vertices, edges, lower };
        p.is_valid_decomposition().then_some(p)
    }

    fn is_valid_decomposition(&self) -> bool {
        let m = self.edges.len();
        let mut classes = 0;
        for i in 0..m {
            let e = &self.edges[i];
            match self.partner(i) {
                Some(j) => {
                    if e.segments != self.edges[j].segments {
                        return false;
                    }
                    if i < j {
                        classes += 1;
                    }
                }
                None => {
                    if !e.segments.is_empty() {
                        return false;
                    }
                    classes += 1;
                }
            }
        }
        let tilde_edges: Vec<usize> = (0..m).filter(|&i| !self.edges[i].tilde.is_empty()).collect();
        if tilde_edges.is_empty() {
            return classes == 2;
        }
        let first = self.edges[tilde_edges[0]].direction();
        if tilde_edges.iter().all(|&i| self.edges[i].direction().det(first) == 0) {
            return false;
        }
        (0..m).all(|i| {
            self.edges[i].segments.is_empty()
                || !self.edges[i].tilde.is_empty()
                || self.partner(i).is_some_and(|j| !self.edges[j].tilde.is_empty())
        })
    }

    pub fn vertices(&self) -> &[IntVec2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[CellEdge] {
        &self.edges
    }

    /// Number of edges in the lower chain.
    pub fn lower_len(&self) -> usize {
        self.lower
    }

    pub fn lower_chain(&self) -> &[CellEdge] {
        &self.edges[..self.lower]
    }

    /// Upper chain edges in counterclockwise order (from `θ`-max back to
    /// `θ`-min).
    pub fn upper_chain(&self) -> &[CellEdge] {
        &self.edges[self.lower..]
    }

    pub fn theta_min(&self) -> IntVec2 {
        self.vertices[0]
    }

    pub fn theta_max(&self) -> IntVec2 {
        self.vertices[self.lower]
    }

    /// The edge parallel and opposite to edge `i`, if any.
    pub fn partner(&self, i: usize) -> Option<usize> {
        let d = self.edges[i].direction();
        (0..self.edges.len()).find(|&j| self.edges[j].direction() == -d)
    }

    /// 0 if `P̃` is a point, 2 otherwise.
    pub fn tilde_dimension(&self) -> usize {
        if self.edges.iter().all(|e| e.tilde.is_empty()) {
            0
        } else {
            2
        }
    }

    /// Number of labels matched to `P̃`.
    pub fn tilde_label_count(&self) -> usize {
        self.edges.iter().map(|e| e.tilde.len()).sum()
    }

    /// Number of marks: the valence of the dual vertex (counting a marked
    /// point placed on it) minus three. Zero when `P̃` is a point.
    pub fn marks(&self, with_point: bool) -> Option<usize> {
        if self.tilde_dimension() == 0 {
            return Some(0);
        }
        (self.tilde_label_count() + usize::from(with_point)).checked_sub(3)
    }

    /// The image under `v ↦ −v`, together with the index shift applied to
    /// the edges: edge `i` of `self` becomes edge `(i + m - shift) % m`.
    pub fn negated(&self) -> (MinkowskiPolytope, usize) {
        let edges: Vec<CellEdge> = self
            .edges
            .iter()
            .map(|e| CellEdge {
                start: -e.start,
                end: -e.end,
                tilde: e.tilde.clone(),
                segments: e.segments.clone(),
            })
            .collect();
        let m = edges.len();
        let shift = (0..m)
            .min_by(|&a, &b| theta_compare(edges[a].start, edges[b].start))
            .expect("nonempty");
        let p = MinkowskiPolytope::new(edges).expect("negation preserves validity");
        (p, shift % m)
    }
}

/// A lattice segment carrying labels on both sides: a pointed segment if
/// its one-dimensional summand `P̃` is present (`lower_tilde` and
/// `upper_tilde` nonempty), a non-pointed segment otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SegmentCell {
    pub start: IntVec2,
    pub end: IntVec2,
    /// Labels of `P̃` on the lower side.
    pub lower_tilde: Labeling,
    /// Labels of `P̃` on the upper side.
    pub upper_tilde: Labeling,
    /// Labels of the parallel segment summands, present on both sides.
    pub segments: Labeling,
}

impl SegmentCell {
    pub fn is_pointed(&self) -> bool {
        !self.lower_tilde.is_empty()
    }

    pub fn length(&self) -> u64 {
        lattice_length(self.start, self.end)
    }

    /// The cell as a degenerate polygon: side 0 runs `start → end` (lower
    /// side), side 1 runs `end → start` (upper side).
    pub fn side(&self, side: usize) -> CellEdge {
        match side {
            0 => CellEdge {
                start: self.start,
                end: self.end,
                tilde: self.lower_tilde.clone(),
                segments: self.segments.clone(),
            },
            _ => CellEdge {
                start: self.end,
                end: self.start,
                tilde: self.upper_tilde.clone(),
                segments: self.segments.clone(),
            },
        }
    }

    /// Marks of a pointed segment counting its marked point; zero for
    /// non-pointed segments.
    pub fn marks(&self) -> Option<usize> {
        if !self.is_pointed() {
            return Some(0);
        }
        (self.lower_tilde.len() + self.upper_tilde.len() + 1).checked_sub(3)
    }

    pub fn negated(&self) -> SegmentCell {
        SegmentCell {
            start: -self.end,
            end: -self.start,
            lower_tilde: self.upper_tilde.clone(),
            upper_tilde: self.lower_tilde.clone(),
            segments: self.segments.clone(),
        }
    }
}

/// Whether the segment `[a, b]` lies in the boundary of `sigma`.
pub fn on_boundary(sigma: &LatticePolytope, a: IntVec2, b: IntVec2) -> bool {
    sigma.facets().iter().any(|f| {
        let d = f.end - f.start;
        d.det(a - f.start) == 0 && d.det(b - f.start) == 0
    })
}

/// All convex lattice polygons with vertices in `sigma`, as
/// counterclockwise vertex lists starting at the `θ`-minimal vertex.
pub fn convex_polygons(sigma: &LatticePolytope) -> Vec<Vec<IntVec2>> {
    let mut points = sigma.lattice_points();
    points.sort_by(|a, b| theta_compare(*a, *b));
    let mut out = Vec::new();
    for (i, &s) in points.iter().enumerate() {
        let later = &points[i + 1..];
        let mut chain = vec![s];
        extend_convex(later, &mut chain, &mut out);
    }
    out
}

fn extend_convex(candidates: &[IntVec2], chain: &mut Vec<IntVec2>, out: &mut Vec<Vec<IntVec2>>) {
    let s = chain[0];
    for &w in candidates {
        if chain.contains(&w) {
            continue;
        }
        let last = *chain.last().expect("nonempty chain");
        if chain.len() >= 2 {
            let prev = chain[chain.len() - 2];
            if (last - prev).det(w - last) <= 0 {
                continue;
            }
        }
        if chain.len() >= 2 {
            let closes = (w - last).det(s - w) > 0 && (s - w).det(chain[1] - s) > 0;
            if closes {
                let mut polygon = chain.clone();
                polygon.push(w);
                out.push(polygon);
            }
        }
        chain.push(w);
        extend_convex(candidates, chain, out);
        chain.pop();
    }
}

type LabelingTriple = (Labeling, Labeling, Labeling);

/// Every Minkowski labeled polytope on a convex polygon whose boundary
/// edges (as decided by `boundary`) carry only labels 1.
pub fn minkowski_structures(
    vertices: &[IntVec2],
    boundary: impl Fn(IntVec2, IntVec2) -> bool,
) -> Vec<MinkowskiPolytope> {
    let m = vertices.len();
    let geometry: Vec<(IntVec2, IntVec2, IntVec2, u64, bool)> = (0..m)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % m]);
            let (dir, len) = primitive_direction(b - a).expect("distinct vertices");
            (a, b, dir, len, boundary(a, b))
        })
        .collect();
    let partner: Vec<Option<usize>> = (0..m)
        .map(|i| (0..m).find(|&j| geometry[j].2 == -geometry[i].2))
        .collect();
    let choices_for = |len: u64, ones: bool| -> Vec<Labeling> {
        if ones {
            vec![vec![1; len as usize]]
        } else {
            partitions(len)
        }
    };
    // Per class: every (segment labeling, tilde labeling of i, of j).
    let mut per_class: Vec<(usize, Option<usize>, Vec<LabelingTriple>)> = Vec::new();
    for i in 0..m {
        let j = partner[i];
        if j.is_some_and(|j| j < i) {
            continue;
        }
        let (len_i, ones_i) = (geometry[i].3, geometry[i].4);
        let mut options = Vec::new();
        match j {
            None => {
                for t in choices_for(len_i, ones_i) {
                    options.push((Vec::new(), t, Vec::new()));
                }
            }
            Some(j) => {
                let (len_j, ones_j) = (geometry[j].3, geometry[j].4);
                for s in 0..=len_i.min(len_j) {
                    for seg in choices_for(s, ones_i || ones_j) {
                        for ti in choices_for(len_i - s, ones_i) {
                            for tj in choices_for(len_j - s, ones_j) {
                                options.push((seg.clone(), ti.clone(), tj));
                            }
                        }
                    }
                }
            }
        }
        per_class.push((i, j, options));
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; per_class.len()];
    loop {
        let mut edges: Vec<CellEdge> = geometry
            .iter()
            .map(|&(start, end, ..)| CellEdge {
                start,
                end,
                tilde: Vec::new(),
                segments: Vec::new(),
            })
            .collect();
        for (c, (i, j, options)) in per_class.iter().enumerate() {
            let (seg, ti, tj) = &options[pick[c]];
            edges[*i].tilde = ti.clone();
            edges[*i].segments = seg.clone();
            if let Some(j) = j {
                edges[*j].tilde = tj.clone();
                edges[*j].segments = seg.clone();
            }
        }
        if let Some(p) = MinkowskiPolytope::new(edges) {
            out.push(p);
        }
        let mut c = 0;
        loop {
            if c == pick.len() {
                return out;
            }
            pick[c] += 1;
            if pick[c] < per_class[c].2.len() {
                break;
            }
            pick[c] = 0;
            c += 1;
        }
    }
}

/// The valid Minkowski labeled polytopes inside a fixed polygon `Σ`,
/// indexed by lower chain and by `θ`-minimal vertex.
#[derive(Debug, Clone)]
pub struct PolygonIndex {
    structures: Vec<MinkowskiPolytope>,
    by_lower: HashMap<Vec<IntVec2>, Vec<usize>>,
    by_start: HashMap<IntVec2, Vec<usize>>,
}

impl PolygonIndex {
    pub fn new(sigma: &LatticePolytope) -> Self {
        let mut structures = Vec::new();
        for polygon in convex_polygons(sigma) {
            structures.extend(minkowski_structures(&polygon, |a, b| on_boundary(sigma, a, b)));
        }
        let mut by_lower: HashMap<Vec<IntVec2>, Vec<usize>> = HashMap::new();
        let mut by_start: HashMap<IntVec2, Vec<usize>> = HashMap::new();
        for (k, p) in structures.iter().enumerate() {
            let chain = p.vertices()[..=p.lower_len()].to_vec();
            by_lower.entry(chain).or_default().push(k);
            by_start.entry(p.theta_min()).or_default().push(k);
        }
        PolygonIndex {
            structures,
            by_lower,
            by_start,
        }
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    /// Polytopes whose lower chain passes through exactly these vertices.
    pub fn with_lower_chain(&self, chain: &[IntVec2]) -> impl Iterator<Item = &MinkowskiPolytope> {
        self.by_lower
            .get(chain)
            .into_iter()
            .flatten()
            .map(|&k| &self.structures[k])
    }

    /// Polytopes whose `θ`-minimal vertex is `start`.
    pub fn starting_at(&self, start: IntVec2) -> impl Iterator<Item = &MinkowskiPolytope> {
        self.by_start
            .get(&start)
            .into_iter()
            .flatten()
            .map(|&k| &self.structures[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> IntVec2 {
        IntVec2::new(x, y)
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(partitions(3), vec![vec![1, 1, 1], vec![1, 2], vec![3]]);
    }

    #[test]
    fn unit_triangle_has_one_structure() {
        let s = minkowski_structures(&[v(0, 0), v(1, 0), v(0, 1)], |_, _| false);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].tilde_dimension(), 2);
        assert_eq!(s[0].marks(false), Some(0));
        assert_eq!(s[0].theta_min(), v(0, 1));
        assert_eq!(s[0].lower_len(), 2);
    }

    #[test]
    fn unit_square_is_a_crossing_or_a_four_valent_vertex() {
        let s = minkowski_structures(&[v(0, 0), v(1, 0), v(1, 1), v(0, 1)], |_, _| false);
        let dims: Vec<usize> = s.iter().map(MinkowskiPolytope::tilde_dimension).collect();
        assert_eq!(s.len(), 2);
        assert!(dims.contains(&0) && dims.contains(&2));
        let vertex = s.iter().find(|p| p.tilde_dimension() == 2).unwrap();
        assert_eq!(vertex.marks(false), Some(1));
    }

    #[test]
    fn trapezoid_admits_a_segment_summand() {
        // conv((0,0),(2,0),(1,1),(0,1)) = unit triangle + horizontal segment.
        let s = minkowski_structures(&[v(0, 0), v(2, 0), v(1, 1), v(0, 1)], |_, _| false);
        assert!(s.iter().any(|p| p.edges().iter().any(|e| e.segments == vec![1])));
        for p in &s {
            for (i, e) in p.edges().iter().enumerate() {
                assert_eq!(e.labeling().iter().sum::<u64>(), e.length());
                if !e.segments.is_empty() {
                    assert_eq!(p.edges()[p.partner(i).unwrap()].segments, e.segments);
                }
            }
        }
    }

    #[test]
    fn boundary_edges_carry_ones() {
        let s = minkowski_structures(&[v(0, 0), v(2, 0), v(0, 2)], |_, _| true);
        assert_eq!(s.len(), 1);
        assert!(s[0].edges().iter().all(|e| e.tilde == vec![1, 1]));
    }

    #[test]
    fn convex_polygons_of_the_unit_square() {
        let square = LatticePolytope::hull([v(0, 0), v(1, 0), v(1, 1), v(0, 1)]).unwrap();
        let polys = convex_polygons(&square);
        assert_eq!(polys.len(), 5);
    }

    #[test]
    fn negation_round_trips() {
        let s = minkowski_structures(&[v(0, 0), v(2, 0), v(1, 1), v(0, 1)], |_, _| false);
        for p in s {
            let (q, shift) = p.negated();
            let m = p.edges().len();
            for i in 0..m {
                let e = &q.edges()[(i + m - shift) % m];
                assert_eq!(e.start, -p.edges()[i].start);
                assert_eq!(e.tilde, p.edges()[i].tilde);
            }
            assert_eq!(q.negated().0, p);
        }
    }
}
