//! Gluing curves from locally solved pieces, and the inverse construction
//! that contracts the floors of a floor-decomposed curve.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crcount_core::multiplicity::{classify_components, ev_ft_det, ExtraConditions};
use crcount_core::{
    builtin_degree, BuiltinDegree, ComponentKind, CrossRatio, DegCrossRatio, EndRef, MarkedTree, RatPoint,
    StableMap,
};
use crcount_oracle::{degenerate_curve, SolvedCurve};

use crate::diagram::{CrossRatioFloorDiagram, DiagramEdge, DiagramVertex, HalfEdge};
use crate::piece::{DiagramPiece, PieceSolver};
use crate::FloorError;

/// Horizontal distance between consecutive marked points.
const STRETCH: i64 = 1_000_000_000_000;
/// Half-width of the range of point heights.
const HEIGHT_SPREAD: i64 = 1_000_000;

/// A curve glued from one local solution per piece.
#[derive(Debug, Clone)]
pub struct GluedCurve {
    pub map: StableMap,
    /// Product of the local multiplicities.
    pub multiplicity: u64,
}

/// The curves glued from a diagram for one stretched configuration.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub points: Vec<RatPoint>,
    pub cross_ratios: Vec<CrossRatio>,
    pub curves: Vec<GluedCurve>,
}

impl Reconstruction {
    pub fn total_multiplicity(&self) -> u64 {
        self.curves.iter().map(|c| c.multiplicity).sum()
    }
}

/// Order in which pieces are solved: every elevator is solved on its thick
/// side first, which fixes the height the thin side needs.
fn gluing_order(diagram: &CrossRatioFloorDiagram) -> Result<Vec<usize>, FloorError> {
    let n = diagram.vertex_count();
    let mut waiting: Vec<usize> = (0..n)
        .map(|v| {
            diagram
                .incident(v)
                .filter(|&e| diagram.edges[e].mark_at(v) == HalfEdge::Thin)
                .count()
        })
        .collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| waiting[v] == 0).collect();
    if ready.is_empty() {
        return Err(FloorError::Reconstruction("no vertex has only thick half-edges".into()));
    }
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for e in diagram.incident(v) {
            let edge = diagram.edges[e];
            if edge.mark_at(v) == HalfEdge::Thick {
                let w = edge.other(v);
                waiting[w] -= 1;
                if waiting[w] == 0 {
                    ready.push(w);
                }
            }
        }
    }
    Ok(order)
}

/// Glues every combination of local solutions for a stretched
/// configuration drawn from `seed`.
pub fn reconstruct(
    diagram: &CrossRatioFloorDiagram,
    lambdas: &[DegCrossRatio],
    seed: u64,
    solver: &mut PieceSolver,
) -> Result<Reconstruction, FloorError> {
    diagram.validate()?;
    if !diagram.satisfies_all(lambdas) {
        return Err(FloorError::NotSatisfied);
    }
    let n = diagram.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<RatPoint> = (0..n)
        .map(|i| RatPoint::from_integers(i as i64 * STRETCH, rng.gen_range(-HEIGHT_SPREAD..=HEIGHT_SPREAD)))
        .collect();
    let mut lengths: Vec<i64> = Vec::new();
    while lengths.len() < lambdas.len() {
        let v = rng.gen_range(1..=1000);
        if !lengths.contains(&v) {
            lengths.push(v);
        }
    }
    let lengths: Vec<BigRational> = lengths.into_iter().map(|l| BigRational::from_integer(l.into())).collect();
    let pieces: Vec<DiagramPiece> = (0..n)
        .map(|v| DiagramPiece::from_diagram(diagram, v, lambdas))
        .collect::<Result<_, _>>()?;
    let order = gluing_order(diagram)?;
    let mut state = Gluing {
        diagram,
        pieces: &pieces,
        points: &points,
        lengths: &lengths,
        order: &order,
        chosen: vec![None; n],
        heights: vec![None; diagram.edges.len()],
        curves: Vec::new(),
    };
    state.run(0, solver)?;
    let curves = state.curves;
    let cross_ratios = lambdas
        .iter()
        .zip(&lengths)
        .map(|(l, len)| CrossRatio {
            pairing: l.default_pairing(),
            length: len.clone(),
        })
        .collect();
    Ok(Reconstruction {
        points,
        cross_ratios,
        curves,
    })
}

struct Gluing<'a> {
    diagram: &'a CrossRatioFloorDiagram,
    pieces: &'a [DiagramPiece],
    points: &'a [RatPoint],
    lengths: &'a [BigRational],
    order: &'a [usize],
    chosen: Vec<Option<SolvedCurve>>,
    heights: Vec<Option<BigRational>>,
    curves: Vec<GluedCurve>,
}

impl Gluing<'_> {
    fn run(&mut self, k: usize, solver: &mut PieceSolver) -> Result<(), FloorError> {
        if k == self.order.len() {
            let curve = self.glue()?;
            self.curves.push(curve);
            return Ok(());
        }
        let v = self.order[k];
        let piece = &self.pieces[v];
        let heights: Vec<Option<BigRational>> = piece.elevators.iter().map(|e| self.heights[e.edge].clone()).collect();
        let instance = piece.instance(self.points[v].clone(), &heights, self.lengths)?;
        let solutions = solver.solve(&instance)?;
        for solution in solutions.curves {
            let positions = solution.map.node_positions()?;
            let mut set = Vec::new();
            for (j, e) in piece.elevators.iter().enumerate() {
                if e.mark == HalfEdge::Thick {
                    let leaf = solution.map.leaf_of(EndRef::EndLabel(piece.elevator_label(j)))?;
                    let base = solution.map.tree().base_vertex(leaf);
                    self.heights[e.edge] = Some(positions[base].y.clone());
                    set.push(e.edge);
                }
            }
            self.chosen[v] = Some(solution);
            self.run(k + 1, solver)?;
            self.chosen[v] = None;
            for e in set {
                self.heights[e] = None;
            }
        }
        Ok(())
    }

    /// Builds the global curve from the chosen local curves.
    fn glue(&self) -> Result<GluedCurve, FloorError> {
        let diagram = self.diagram;
        let d = diagram.d;
        let n = diagram.vertex_count();
        let leaf_count = n + 3 * d as usize;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut lengths: Vec<Option<BigRational>> = Vec::new();
        let mut offset = leaf_count;
        // Global node and position of the base vertex of every elevator end,
        // per diagram edge and side.
        let mut elevator_ends: Vec<[Option<(usize, RatPoint)>; 2]> = vec![[None, None]; diagram.edges.len()];
        let mut multiplicity = 1u64;
        for v in 0..n {
            let solution = self.chosen[v].as_ref().expect("every piece is chosen");
            let piece = &self.pieces[v];
            multiplicity *= solution.multiplicity * piece.height_factor();
            let local = &solution.map;
            let tree = local.tree();
            let positions = local.node_positions()?;
            let local_leaves = tree.leaf_count();
            let node = |x: usize| offset + x - local_leaves;
            let global_labels: Vec<usize> = piece
                .diagonal_labels
                .iter()
                .chain(&piece.bottom_labels)
                .chain(&piece.left_labels)
                .copied()
                .collect();
            for e in 0..tree.edge_count() {
                let (a, b) = tree.edge(e);
                if tree.is_bounded(e) {
                    edges.push((node(a), node(b)));
                    lengths.push(local.length(e).cloned());
                    continue;
                }
                match local.leaf_ref(b) {
                    EndRef::MarkedPoint(_) => {
                        edges.push((node(a), v));
                        lengths.push(None);
                    }
                    EndRef::EndLabel(t) if t <= global_labels.len() => {
                        edges.push((node(a), n + global_labels[t - 1] - 1));
                        lengths.push(None);
                    }
                    EndRef::EndLabel(t) => {
                        let el = piece.elevators[t - global_labels.len() - 1];
                        let side = usize::from(el.incoming);
                        elevator_ends[el.edge][side] = Some((node(a), positions[a].clone()));
                    }
                }
            }
            offset += tree.node_count() - local_leaves;
        }
        for (i, ends) in elevator_ends.iter().enumerate() {
            let edge: &DiagramEdge = &diagram.edges[i];
            let (Some((a, pa)), Some((b, pb))) = (&ends[0], &ends[1]) else {
                return Err(FloorError::Reconstruction(format!("elevator {i} has a missing end")));
            };
            if pa.y != pb.y {
                return Err(FloorError::Reconstruction(format!("elevator {i} has ends at different heights")));
            }
            let length = (&pb.x - &pa.x) / BigRational::from_integer(BigInt::from(edge.weight));
            if !length.is_positive() {
                return Err(FloorError::Reconstruction(format!("elevator {i} has nonpositive length")));
            }
            edges.push((*a, *b));
            lengths.push(Some(length));
        }
        let tree = MarkedTree::from_edges(leaf_count, offset, edges)?;
        let degree = builtin_degree(&BuiltinDegree::DeltaD(d))?;
        let bounded: Vec<BigRational> = (0..tree.edge_count())
            .filter(|&e| tree.is_bounded(e))
            .map(|e| lengths[e].clone().expect("bounded edges carry lengths"))
            .collect();
        let map = StableMap::new(tree, degree, n)?.with_metric(self.points[0].clone(), bounded)?;
        Ok(GluedCurve { map, multiplicity })
    }
}

/// Reconstructs the curves of a diagram and checks them: every glued curve
/// is balanced, passes through the points, realizes the cross-ratios, has
/// the product of the local multiplicities as its determinant, and
/// contracts back to `diagram`. The multiplicities must add up to
/// `multiplicity`.
pub fn verify_reconstruction(
    diagram: &CrossRatioFloorDiagram,
    lambdas: &[DegCrossRatio],
    multiplicity: u64,
    seed: u64,
    solver: &mut PieceSolver,
) -> Result<Reconstruction, FloorError> {
    let fail = |msg: String| Err(FloorError::Reconstruction(msg));
    let rec = reconstruct(diagram, lambdas, seed, solver)?;
    if rec.total_multiplicity() != multiplicity {
        return fail(format!(
            "glued curves have total multiplicity {}, expected {multiplicity}",
            rec.total_multiplicity()
        ));
    }
    let pairings: Vec<_> = rec.cross_ratios.iter().map(|c| c.pairing).collect();
    for (i, curve) in rec.curves.iter().enumerate() {
        let map = &curve.map;
        if !map.is_balanced() {
            return fail(format!("curve {i} is not balanced"));
        }
        for (j, p) in rec.points.iter().enumerate() {
            if &map.point_image(j + 1)? != p {
                return fail(format!("curve {i} misses point {}", j + 1));
            }
        }
        for cr in &rec.cross_ratios {
            if !map.satisfies(cr)? {
                return fail(format!("curve {i} violates a cross-ratio"));
            }
        }
        let extra = ExtraConditions {
            cross_ratios: &pairings,
            height_ends: &[],
        };
        let det = ev_ft_det(map, extra)?;
        if det != BigInt::from(curve.multiplicity) {
            return fail(format!("curve {i} has determinant {det}, expected {}", curve.multiplicity));
        }
        let extracted = extract_diagram(map, lambdas, diagram.d)?;
        if extracted != diagram.normalized() {
            return fail(format!("curve {i} contracts to a different diagram:\n{extracted}"));
        }
    }
    Ok(rec)
}

/// Contracts the floors of a floor-decomposed curve that satisfies the
/// degenerated cross-ratios `lambdas`. Cross-ratios realized with nonzero
/// length are degenerated first.
pub fn extract_diagram(curve: &StableMap, lambdas: &[DegCrossRatio], d: u64) -> Result<CrossRatioFloorDiagram, FloorError> {
    let pairings: Vec<_> = lambdas.iter().map(DegCrossRatio::default_pairing).collect();
    let map = degenerate_curve(curve, &pairings)?;
    let decomposition = map.floors_and_elevators();
    if !decomposition.is_floor_decomposed {
        return Err(FloorError::Reconstruction("the curve is not floor decomposed".into()));
    }
    let n = map.point_count();
    let mut floor_vertex = vec![usize::MAX; decomposition.floors.len()];
    let mut vertices = vec![
        DiagramVertex {
            size: 0,
            lambda_count: 0,
            labels: BTreeSet::new(),
        };
        n
    ];
    let carriers = map.lambda_carriers(lambdas)?;
    for (f, floor) in decomposition.floors.iter().enumerate() {
        let v = floor.points[0] - 1;
        floor_vertex[f] = v;
        vertices[v] = DiagramVertex {
            size: floor.size as u64,
            lambda_count: carriers
                .iter()
                .filter(|c| c.is_some_and(|c| floor.vertices.contains(&c)))
                .count(),
            labels: floor.end_labels.iter().copied().collect(),
        };
    }
    let tree = map.tree();
    let mut edges = Vec::new();
    for el in &decomposition.elevators {
        let (Some(fa), Some(fb)) = el.floors else {
            continue;
        };
        let (a, b) = tree.edge(el.edge);
        let mark = |u: usize| -> Result<HalfEdge, FloorError> {
            let classes = classify_components(&map, lambdas, u)?;
            let class = classes
                .iter()
                .find(|c| c.edge == el.edge)
                .ok_or_else(|| FloorError::Reconstruction("elevator missing from its vertex".into()))?;
            Ok(match class.kind {
                ComponentKind::Fixed => HalfEdge::Thin,
                ComponentKind::Free => HalfEdge::Thick,
            })
        };
        let (va, vb) = (floor_vertex[fa], floor_vertex[fb]);
        let (ma, mb) = (mark(a)?, mark(b)?);
        let edge = if va < vb {
            DiagramEdge {
                source: va,
                target: vb,
                weight: el.weight,
                source_mark: ma,
                target_mark: mb,
            }
        } else {
            DiagramEdge {
                source: vb,
                target: va,
                weight: el.weight,
                source_mark: mb,
                target_mark: ma,
            }
        };
        edges.push(edge);
    }
    edges.sort_by_key(|e| (e.source, e.target));
    if edges.iter().any(|e| e.weight.is_zero()) {
        return Err(FloorError::Reconstruction("elevator of weight zero".into()));
    }
    Ok(CrossRatioFloorDiagram { d, vertices, edges })
}
