//! Rational tropical stable maps to the plane and their combinatorial
//! predicates.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::cross_ratio::{CrossRatio, DegCrossRatio, EndRef, Pairing};
use crate::degree::Degree;
use crate::error::CoreError;
use crate::lattice::IntVec2;
use crate::tree::{LeafMask, MarkedTree};

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RatPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RatPoint { x, y }
    }

    pub fn from_integers(x: i64, y: i64) -> Self {
        RatPoint::new(
            BigRational::from_integer(x.into()),
            BigRational::from_integer(y.into()),
        )
    }

    /// `self + t·v`.
    pub fn offset(&self, v: IntVec2, t: &BigRational) -> RatPoint {
        RatPoint::new(
            &self.x + t * BigRational::from_integer(v.x.into()),
            &self.y + t * BigRational::from_integer(v.y.into()),
        )
    }
}

/// A rational stable map: a leaf-labeled tree whose first `points` leaves
/// are contracted marked points and whose remaining leaves carry the
/// degree labels `1..=|Δ|` in order. Edge directions follow from the degree
/// by balancing; the metric (anchor and bounded edge lengths) is optional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableMap {
    tree: MarkedTree,
    degree: Degree,
    points: usize,
    lengths: Vec<Option<BigRational>>,
    anchor: Option<RatPoint>,
}

/// Leaf-relative isomorphism class of a stable map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalType {
    pub leaves: usize,
    pub splits: Vec<LeafMask>,
}

impl StableMap {
    /// A combinatorial type without metric.
    pub fn new(tree: MarkedTree, degree: Degree, points: usize) -> Result<Self, CoreError> {
        if tree.leaf_count() != points + degree.len() {
            return Err(CoreError::InvalidTree(format!(
                "{} leaves for {} points and {} ends",
                tree.leaf_count(),
                points,
                degree.len()
            )));
        }
        let lengths = vec![None; tree.edge_count()];
        Ok(StableMap {
            tree,
            degree,
            points,
            lengths,
            anchor: None,
        })
    }

    /// Attaches a metric. `lengths` lists one nonnegative length per
    /// bounded edge, in the order of [`MarkedTree::bounded_edges`].
    /// The anchor is the image of the vertex carrying leaf 0.
    pub fn with_metric(
        mut self,
        anchor: RatPoint,
        lengths: Vec<BigRational>,
    ) -> Result<Self, CoreError> {
        let bounded: Vec<usize> = self.tree.bounded_edges().collect();
        if bounded.len() != lengths.len() {
            return Err(CoreError::InvalidTree(format!(
                "{} lengths for {} bounded edges",
                lengths.len(),
                bounded.len()
            )));
        }
        if lengths.iter().any(Signed::is_negative) {
            return Err(CoreError::InvalidTree("negative edge length".into()));
        }
        for (e, l) in bounded.into_iter().zip(lengths) {
            self.lengths[e] = Some(l);
        }
        self.anchor = Some(anchor);
        Ok(self)
    }

    pub fn tree(&self) -> &MarkedTree {
        &self.tree
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    /// Number of marked points `n`.
    pub fn point_count(&self) -> usize {
        self.points
    }

    pub fn anchor(&self) -> Option<&RatPoint> {
        self.anchor.as_ref()
    }

    pub fn length(&self, e: usize) -> Option<&BigRational> {
        self.lengths[e].as_ref()
    }

    pub fn has_metric(&self) -> bool {
        self.anchor.is_some()
    }

    /// Direction vector of a leaf's end (zero for marked points).
    pub fn leaf_vector(&self, leaf: usize) -> IntVec2 {
        if leaf < self.points {
            IntVec2::ZERO
        } else {
            self.degree.entries()[leaf - self.points].vector
        }
    }

    pub fn leaf_ref(&self, leaf: usize) -> EndRef {
        EndRef::from_leaf(leaf, self.points)
    }

    pub fn leaf_of(&self, r: EndRef) -> Result<usize, CoreError> {
        r.leaf(self.points, self.degree.len())
    }

    pub fn resolve(&self, p: &Pairing) -> Result<[usize; 4], CoreError> {
        let r = p.refs();
        Ok([
            self.leaf_of(r[0])?,
            self.leaf_of(r[1])?,
            self.leaf_of(r[2])?,
            self.leaf_of(r[3])?,
        ])
    }

    /// Weighted direction of edge `e` pointing away from `from`: the sum of
    /// the end vectors beyond it.
    pub fn direction(&self, e: usize, from: usize) -> IntVec2 {
        let mask = self.tree.far_side(e, from);
        crate::tree::mask_leaves(mask)
            .map(|l| self.leaf_vector(l))
            .sum()
    }

    /// Whether the outgoing directions sum to zero at every vertex.
    pub fn is_balanced(&self) -> bool {
        self.tree.vertices().all(|v| {
            self.tree
                .neighbors(v)
                .iter()
                .map(|&(_, e)| self.direction(e, v))
                .sum::<IntVec2>()
                .is_zero()
        })
    }

    pub fn canonical_form(&self) -> CanonicalType {
        CanonicalType {
            leaves: self.tree.leaf_count(),
            splits: self.tree.canonical_splits(),
        }
    }

    /// Images of all nodes; a leaf is mapped to the image of its vertex.
    pub fn node_positions(&self) -> Result<Vec<RatPoint>, CoreError> {
        let anchor = self.anchor.clone().ok_or(CoreError::MissingAnchor)?;
        let t = &self.tree;
        let root = t.base_vertex(0);
        let mut pos: Vec<Option<RatPoint>> = vec![None; t.node_count()];
        pos[root] = Some(anchor);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let pu = pos[u].clone().expect("visited");
            for &(w, e) in t.neighbors(u) {
                if pos[w].is_some() || w < t.leaf_count() {
                    continue;
                }
                let len = self.lengths[e]
                    .as_ref()
                    .ok_or(CoreError::MissingLength(e))?;
                pos[w] = Some(pu.offset(self.direction(e, u), len));
                stack.push(w);
            }
        }
        for leaf in 0..t.leaf_count() {
            pos[leaf] = pos[t.base_vertex(leaf)].clone();
        }
        Ok(pos
            .into_iter()
            .map(|p| p.expect("tree is connected"))
            .collect())
    }

    /// Image of marked point `j` (1-based).
    pub fn point_image(&self, j: usize) -> Result<RatPoint, CoreError> {
        let leaf = self.leaf_of(EndRef::MarkedPoint(j))?;
        Ok(self.node_positions()?.swap_remove(leaf))
    }

    /// Sign with which edge `e` enters the cross-ratio on `pairing`:
    /// `+1` for the split `12|34`, `-1` for `14|23`, otherwise `0`.
    pub fn separation_sign(&self, e: usize, pairing: &Pairing) -> Result<i8, CoreError> {
        Ok(separation_sign(&self.tree, e, self.resolve(pairing)?))
    }

    /// Signed sum of the lengths of the bounded edges separating the pairs.
    pub fn cross_ratio_value(&self, cr: &CrossRatio) -> Result<BigRational, CoreError> {
        let leaves = self.resolve(&cr.pairing)?;
        let mut total = BigRational::zero();
        for e in self.tree.bounded_edges() {
            let sign = separation_sign(&self.tree, e, leaves);
            if sign != 0 {
                let len = self.lengths[e]
                    .as_ref()
                    .ok_or(CoreError::MissingLength(e))?;
                if sign > 0 {
                    total += len;
                } else {
                    total -= len;
                }
            }
        }
        Ok(total)
    }

    /// Whether the curve satisfies a cross-ratio with positive length.
    pub fn satisfies(&self, cr: &CrossRatio) -> Result<bool, CoreError> {
        Ok(self.cross_ratio_value(cr)? == cr.length)
    }

    /// Indices into `lambdas` of the degenerated cross-ratios whose four
    /// references lie in four different branches at `v`.
    pub fn lambda_v(&self, v: usize, lambdas: &[DegCrossRatio]) -> Result<Vec<usize>, CoreError> {
        let branches: Vec<LeafMask> = self.tree.branches(v).map(|(_, _, m)| m).collect();
        let mut out = Vec::new();
        for (i, l) in lambdas.iter().enumerate() {
            let leaves = self.resolve(&l.default_pairing())?;
            let mut hit = BTreeSet::new();
            for leaf in leaves {
                if let Some(b) = branches.iter().position(|m| m >> leaf & 1 == 1) {
                    hit.insert(b);
                }
            }
            if hit.len() == 4 {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// The vertex carrying each degenerated cross-ratio, if any.
    pub fn lambda_carriers(
        &self,
        lambdas: &[DegCrossRatio],
    ) -> Result<Vec<Option<usize>>, CoreError> {
        let mut carriers = vec![None; lambdas.len()];
        for v in self.tree.vertices() {
            for i in self.lambda_v(v, lambdas)? {
                carriers[i] = Some(v);
            }
        }
        Ok(carriers)
    }

    /// Whether every cross-ratio sits at a vertex and every vertex `v` has
    /// valence `3 + #λ_v`.
    pub fn validate_constrained_type(&self, lambdas: &[DegCrossRatio]) -> bool {
        let mut covered = 0;
        for v in self.tree.vertices() {
            let Ok(at_v) = self.lambda_v(v, lambdas) else {
                return false;
            };
            if self.tree.valence(v) != 3 + at_v.len() {
                return false;
            }
            covered += at_v.len();
        }
        covered == lambdas.len()
    }

    /// A new map in which the edges selected by `contract` are collapsed.
    /// Contracting ends is not allowed. The metric is kept only when every
    /// contracted edge has direction zero, in which case images agree.
    pub fn contract_edges(&self, contract: impl Fn(usize) -> bool) -> Result<StableMap, CoreError> {
        let t = &self.tree;
        let mut rep: Vec<usize> = (0..t.node_count()).collect();
        fn find(rep: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while rep[r] != r {
                r = rep[r];
            }
            rep[x] = r;
            r
        }
        let chosen: Vec<usize> = t.bounded_edges().filter(|&e| contract(e)).collect();
        for &e in &chosen {
            let (a, b) = t.edge(e);
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            rep[ra.max(rb)] = ra.min(rb);
        }
        let leaf_count = t.leaf_count();
        let mut new_index = vec![usize::MAX; t.node_count()];
        let mut next = leaf_count;
        for (node, slot) in new_index.iter_mut().enumerate() {
            if node < leaf_count {
                *slot = node;
            }
        }
        for node in t.vertices() {
            let r = find(&mut rep, node);
            if new_index[r] == usize::MAX {
                new_index[r] = next;
                next += 1;
            }
            new_index[node] = new_index[r];
        }
        let keep_metric = self.has_metric()
            && chosen
                .iter()
                .all(|&e| self.direction(e, t.edge(e).0).is_zero());
        let mut edges = Vec::new();
        let mut lengths = Vec::new();
        for e in 0..t.edge_count() {
            if chosen.contains(&e) {
                continue;
            }
            let (a, b) = t.edge(e);
            edges.push((new_index[a], new_index[b]));
            if t.is_bounded(e) {
                lengths.push(self.lengths[e].clone());
            }
        }
        let tree = MarkedTree::from_edges(leaf_count, next, edges)?;
        let map = StableMap::new(tree, self.degree.clone(), self.points)?;
        if keep_metric {
            let lengths = lengths
                .into_iter()
                .map(|l| l.expect("metric present"))
                .collect();
            map.with_metric(self.anchor.clone().expect("metric present"), lengths)
        } else {
            Ok(map)
        }
    }
}

/// Sign of edge `e` for the pairing given by leaf indices `[a, b, c, d]`.
pub fn separation_sign(tree: &MarkedTree, e: usize, leaves: [usize; 4]) -> i8 {
    let far = tree.far_side(e, tree.edge(e).0);
    let [a, b, c, d] = leaves.map(|l| far >> l & 1);
    if a == b && c == d && a != c {
        1
    } else if a == d && b == c && a != b {
        -1
    } else {
        0
    }
}

/// A horizontal edge of a curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elevator {
    pub edge: usize,
    pub weight: u64,
    /// Floor indices at the two endpoints; `None` for the leaf side of an
    /// unbounded elevator.
    pub floors: (Option<usize>, Option<usize>),
}

/// A connected component of a curve after removing elevator interiors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Floor {
    pub vertices: Vec<usize>,
    /// Number of ends with direction (1,1).
    pub size: usize,
    /// Marked points (1-based) on the floor.
    pub points: Vec<usize>,
    /// Degree labels of all non-contracted ends attached to the floor,
    /// including horizontal ones.
    pub end_labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorDecomposition {
    pub elevators: Vec<Elevator>,
    pub floors: Vec<Floor>,
    pub is_floor_decomposed: bool,
}

impl StableMap {
    /// Splits the curve into elevators (edges of horizontal nonzero
    /// direction) and floors.
    pub fn floors_and_elevators(&self) -> FloorDecomposition {
        let t = &self.tree;
        let is_elevator = |e: usize| {
            let d = self.direction(e, t.edge(e).0);
            d.y == 0 && d.x != 0
        };
        let mut floor_of = vec![usize::MAX; t.node_count()];
        let mut floors = Vec::new();
        for start in t.vertices() {
            if floor_of[start] != usize::MAX {
                continue;
            }
            let id = floors.len();
            let mut floor = Floor {
                vertices: Vec::new(),
                size: 0,
                points: Vec::new(),
                end_labels: Vec::new(),
            };
            let mut stack = vec![start];
            floor_of[start] = id;
            while let Some(u) = stack.pop() {
                floor.vertices.push(u);
                for &(w, e) in t.neighbors(u) {
                    if w < t.leaf_count() {
                        match self.leaf_ref(w) {
                            EndRef::MarkedPoint(j) => floor.points.push(j),
                            EndRef::EndLabel(label) => {
                                floor.end_labels.push(label);
                                if self.leaf_vector(w) == IntVec2::new(1, 1) {
                                    floor.size += 1;
                                }
                            }
                        }
                    } else if !is_elevator(e) && floor_of[w] == usize::MAX {
                        floor_of[w] = id;
                        stack.push(w);
                    }
                }
            }
            floor.vertices.sort_unstable();
            floor.points.sort_unstable();
            floor.end_labels.sort_unstable();
            floors.push(floor);
        }
        let elevators = (0..t.edge_count())
            .filter(|&e| is_elevator(e))
            .map(|e| {
                let (a, b) = t.edge(e);
                let weight = self.direction(e, a).x.unsigned_abs();
                let side = |x: usize| (x >= t.leaf_count()).then(|| floor_of[x]);
                Elevator {
                    edge: e,
                    weight,
                    floors: (side(a), side(b)),
                }
            })
            .collect();
        let is_floor_decomposed = floors.iter().all(|f| f.points.len() == 1);
        FloorDecomposition {
            elevators,
            floors,
            is_floor_decomposed,
        }
    }
}

/// The image of an edge: a segment for bounded edges, a ray for ends.
#[derive(Debug, Clone)]
struct EdgeImage {
    start: RatPoint,
    dir: IntVec2,
    /// Parameter range `[0, len]` along `dir`; `None` for a ray.
    len: Option<BigRational>,
    ends: (usize, usize),
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

impl EdgeImage {
    /// Parameter `t` with `start + t·dir = p`, if `p` lies on the line.
    fn param_on_line(&self, p: &RatPoint) -> Option<BigRational> {
        let dx = &p.x - &self.start.x;
        let dy = &p.y - &self.start.y;
        if dx.clone() * rat(self.dir.y) != dy.clone() * rat(self.dir.x) {
            return None;
        }
        Some(if self.dir.x != 0 {
            dx / rat(self.dir.x)
        } else {
            dy / rat(self.dir.y)
        })
    }

    fn in_range(&self, t: &BigRational, open: bool) -> bool {
        let above = if open {
            t.is_positive()
        } else {
            !t.is_negative()
        };
        let below = match &self.len {
            None => true,
            Some(l) => {
                if open {
                    t < l
                } else {
                    t <= l
                }
            }
        };
        above && below
    }

    fn contains(&self, p: &RatPoint, open: bool) -> bool {
        self.param_on_line(p)
            .is_some_and(|t| self.in_range(&t, open))
    }

    /// Whether two collinear images share a segment of positive length.
    fn overlaps(&self, other: &EdgeImage) -> bool {
        if self.dir.det(other.dir) != 0 {
            return false;
        }
        let Some(t0) = self.param_on_line(&other.start) else {
            return false;
        };
        let scale = if self.dir.x != 0 {
            rat(other.dir.x) / rat(self.dir.x)
        } else {
            rat(other.dir.y) / rat(self.dir.y)
        };
        let far = |len: &Option<BigRational>| len.as_ref().map(|l| &t0 + l * &scale);
        let (lo_o, hi_o) = match far(&other.len) {
            Some(t1) if t1 < t0 => (Some(t1), Some(t0.clone())),
            Some(t1) => (Some(t0.clone()), Some(t1)),
            None if scale.is_positive() => (Some(t0.clone()), None),
            None => (None, Some(t0.clone())),
        };
        let lo_s = BigRational::zero();
        let hi_s = self.len.clone();
        let lo = match lo_o {
            Some(l) if l > lo_s => l,
            _ => lo_s,
        };
        match (hi_s, hi_o) {
            (None, None) => true,
            (Some(h), None) | (None, Some(h)) => h > lo,
            (Some(a), Some(b)) => a.min(b) > lo,
        }
    }

    fn intersection(&self, other: &EdgeImage) -> Option<RatPoint> {
        let det = self.dir.det(other.dir);
        if det == 0 {
            return None;
        }
        let dx = &other.start.x - &self.start.x;
        let dy = &other.start.y - &self.start.y;
        let t = (dx * rat(other.dir.y) - dy * rat(other.dir.x)) / rat(det);
        Some(self.start.offset(self.dir, &t))
    }
}

impl StableMap {
    fn edge_images(&self) -> Result<Vec<EdgeImage>, CoreError> {
        let pos = self.node_positions()?;
        let t = &self.tree;
        let mut out = Vec::new();
        for e in 0..t.edge_count() {
            let (a, b) = t.edge(e);
            let dir = self.direction(e, a);
            if dir.is_zero() {
                continue;
            }
            let len = if t.is_bounded(e) {
                let l = self.lengths[e].clone().ok_or(CoreError::MissingLength(e))?;
                if l.is_zero() {
                    continue;
                }
                Some(l)
            } else {
                None
            };
            out.push(EdgeImage {
                start: pos[a].clone(),
                dir,
                len,
                ends: (a, b),
            });
        }
        Ok(out)
    }

    /// Whether the curve is simple: its vertices have distinct images, any
    /// vertex lying on a non-adjacent edge comes from an overlap of
    /// collinear edges that reconnect at a common vertex, and no point is
    /// passed by edges of more than two slopes.
    pub fn is_simple(&self) -> Result<bool, CoreError> {
        let pos = self.node_positions()?;
        let t = &self.tree;
        let verts: Vec<usize> = t.vertices().collect();
        let distinct: BTreeSet<&RatPoint> = verts.iter().map(|&v| &pos[v]).collect();
        if distinct.len() != verts.len() {
            return Ok(false);
        }
        let images = self.edge_images()?;
        for &v in &verts {
            for img in &images {
                if img.ends.0 == v || img.ends.1 == v || !img.contains(&pos[v], false) {
                    continue;
                }
                if !self.overlap_explained(v, img, &images) {
                    return Ok(false);
                }
            }
        }
        let mut crossings = BTreeSet::new();
        for (i, a) in images.iter().enumerate() {
            for b in &images[i + 1..] {
                if let Some(p) = a.intersection(b) {
                    if a.contains(&p, true) && b.contains(&p, true) {
                        crossings.insert(p);
                    }
                }
            }
        }
        for p in crossings {
            let slopes: BTreeSet<IntVec2> = images
                .iter()
                .filter(|img| img.contains(&p, true))
                .map(|img| {
                    crate::lattice::primitive_direction(img.dir)
                        .expect("nonzero")
                        .0
                })
                .map(|d| {
                    if d.x < 0 || (d.x == 0 && d.y < 0) {
                        -d
                    } else {
                        d
                    }
                })
                .collect();
            if slopes.len() > 2 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn overlap_explained(&self, v: usize, img: &EdgeImage, images: &[EdgeImage]) -> bool {
        let adjacent: Vec<&EdgeImage> = images
            .iter()
            .filter(|i| i.ends.0 == v || i.ends.1 == v)
            .collect();
        let collinear_component = |seed: &EdgeImage| -> BTreeSet<usize> {
            let line = seed.dir;
            let mut nodes = BTreeSet::from([seed.ends.0, seed.ends.1]);
            loop {
                let before = nodes.len();
                for i in images {
                    if i.dir.det(line) == 0
                        && seed.param_on_line(&i.start).is_some()
                        && (nodes.contains(&i.ends.0) || nodes.contains(&i.ends.1))
                    {
                        nodes.insert(i.ends.0);
                        nodes.insert(i.ends.1);
                    }
                }
                if nodes.len() == before {
                    return nodes;
                }
            }
        };
        adjacent.iter().any(|adj| {
            img.overlaps(adj) && {
                let a = collinear_component(img);
                let b = collinear_component(adj);
                a.intersection(&b).any(|&x| x >= self.tree.leaf_count())
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::{builtin_degree, BuiltinDegree};
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    /// Caterpillar with leaves {0,1} | e | {2,3}: leaves are four
    /// marked points on a degree-one line with ends attached elsewhere.
    fn four_leaf_caterpillar() -> MarkedTree {
        MarkedTree::from_edges(4, 6, vec![(4, 0), (4, 1), (4, 5), (5, 2), (5, 3)]).unwrap()
    }

    #[test]
    fn sign_table_on_a_caterpillar() {
        let t = four_leaf_caterpillar();
        assert_eq!(separation_sign(&t, 2, [0, 1, 2, 3]), 1);
        assert_eq!(separation_sign(&t, 2, [0, 3, 1, 2]), 0);
        assert_eq!(separation_sign(&t, 2, [0, 2, 3, 1]), -1);
        assert_eq!(separation_sign(&t, 2, [0, 2, 1, 3]), 0);
    }

    /// The line of degree one through one marked point attached at the
    /// vertex of the ends (-1,0) and (0,-1), with the (1,1) end separated
    /// by a bounded edge of length `len`.
    fn line_with_point(len: i64) -> StableMap {
        let deg = builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap();
        let tree =
            MarkedTree::from_edges(4, 6, vec![(4, 0), (4, 1), (4, 5), (5, 2), (5, 3)]).unwrap();
        StableMap::new(tree, deg, 1)
            .unwrap()
            .with_metric(RatPoint::from_integers(0, 0), vec![q(len)])
            .unwrap()
    }

    #[test]
    fn directions_and_positions() {
        let m = line_with_point(2);
        assert_eq!(m.direction(2, 4), IntVec2::new(1, 0));
        assert_eq!(m.direction(2, 5), IntVec2::new(-1, 0));
        assert!(m.is_balanced());
        let pos = m.node_positions().unwrap();
        assert_eq!(pos[5], RatPoint::from_integers(2, 0));
    }

    #[test]
    fn cross_ratio_value_sums_separating_lengths() {
        let m = line_with_point(5);
        let p = Pairing::new([
            EndRef::MarkedPoint(1),
            EndRef::EndLabel(1),
            EndRef::EndLabel(2),
            EndRef::EndLabel(3),
        ])
        .unwrap();
        let cr = CrossRatio::new(p, q(5)).unwrap();
        assert_eq!(m.cross_ratio_value(&cr).unwrap(), q(5));
        assert!(m.satisfies(&cr).unwrap());
        let other = CrossRatio::new(p.alternatives()[1], q(5)).unwrap();
        assert_eq!(m.cross_ratio_value(&other).unwrap(), q(0));
    }

    #[test]
    fn lambda_at_four_valent_vertex() {
        let deg = builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap();
        let tree = MarkedTree::from_edges(4, 5, vec![(4, 0), (4, 1), (4, 2), (4, 3)]).unwrap();
        let m = StableMap::new(tree, deg, 1).unwrap();
        let l = DegCrossRatio::new([
            EndRef::MarkedPoint(1),
            EndRef::EndLabel(1),
            EndRef::EndLabel(2),
            EndRef::EndLabel(3),
        ])
        .unwrap();
        assert_eq!(m.lambda_v(4, &[l]).unwrap(), vec![0]);
        assert!(m.validate_constrained_type(&[l]));
        assert!(!m.validate_constrained_type(&[]));
    }

    #[test]
    fn floors_of_a_line() {
        let m = line_with_point(1);
        let fe = m.floors_and_elevators();
        assert_eq!(fe.elevators.len(), 2);
        assert_eq!(fe.floors.len(), 2);
        let sizes: Vec<_> = fe.floors.iter().map(|f| (f.size, f.points.len())).collect();
        assert_eq!(sizes, vec![(0, 1), (1, 0)]);
        assert!(!fe.is_floor_decomposed);
    }

    #[test]
    fn simple_line() {
        assert!(line_with_point(3).is_simple().unwrap());
    }

    #[test]
    fn contracting_a_bounded_edge() {
        let m = line_with_point(1);
        let c = m.contract_edges(|e| e == 2).unwrap();
        assert_eq!(c.tree().node_count(), 5);
        assert!(!c.has_metric());
        assert!(c.is_balanced());
    }
}
