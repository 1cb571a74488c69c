//! The tropical curve dual to a lattice path subdivision: its graph, end
//! labels, the fit with the cross-ratios, its multiplicity and its
//! position through stretched points.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crcount_core::linalg::solve;
use crcount_core::{
    ev_ft_matrix, total_multiplicity, DegCrossRatio, EndRef, ExtraConditions, IntVec2, MarkedTree, RatPoint,
    StableMap,
};

use crate::coloring::Summand;
use crate::context::LatticePathContext;
use crate::subdivision::LatticePathSubdivision;
use crate::LatticePathError;

/// A bounded edge of the dual graph, joining the vertices dual to two
/// cells. `direction` is the weighted direction leaving `cells.0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualEdge {
    pub cells: (usize, usize),
    pub weight: u64,
    pub direction: IntVec2,
}

/// An end of the dual graph, dual to a boundary label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualEnd {
    pub cell: usize,
    pub instance: usize,
    pub facet: usize,
    pub direction: IntVec2,
}

/// The dual graph of a subdivision: one vertex per cell with a vertex,
/// one edge per chain of glued labels between two such cells, one end per
/// chain reaching `∂Σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<DualEdge>,
    pub ends: Vec<DualEnd>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Builds the dual graph, rejecting subdivisions whose dual is reducible
/// (a chain running from boundary to boundary), has a loop, or is not a
/// tree.
pub fn dual_graph(s: &LatticePathSubdivision) -> Result<DualGraph, LatticePathError> {
    let count = s.instances.len();
    let mut parent: Vec<usize> = (0..count).collect();
    let union = |a: usize, b: usize, parent: &mut Vec<usize>| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        parent[ra] = rb;
    };
    for &(a, b) in &s.gluings {
        union(a, b, &mut parent);
    }
    let mut segment_groups: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, inst) in s.instances.iter().enumerate() {
        if let Summand::Segment(id) = inst.summand {
            if let Some(&j) = segment_groups.get(&(inst.cell, id)) {
                union(i, j, &mut parent);
            } else {
                segment_groups.insert((inst.cell, id), i);
            }
        }
    }
    let boundary: HashMap<usize, usize> = s.boundary.iter().map(|b| (b.instance, b.facet)).collect();
    let mut endpoints: BTreeMap<usize, Vec<(usize, bool)>> = BTreeMap::new();
    for (i, inst) in s.instances.iter().enumerate() {
        let root = find(&mut parent, i);
        if inst.summand == Summand::Tilde && s.cells[inst.cell].has_vertex() {
            endpoints.entry(root).or_default().push((i, false));
        }
        if boundary.contains_key(&i) {
            endpoints.entry(root).or_default().push((i, true));
        }
    }
    let vertices: Vec<usize> = (0..s.cells.len()).filter(|&c| s.cells[c].has_vertex()).collect();
    let mut edges = Vec::new();
    let mut ends = Vec::new();
    for list in endpoints.values() {
        let &[(a, a_end), (b, b_end)] = list.as_slice() else {
            return Err(LatticePathError::NotATree);
        };
        let direction = |i: usize| s.normal(i) * s.instances[i].value as i64;
        match (a_end, b_end) {
            (true, true) => return Err(LatticePathError::Reducible),
            (false, false) => {
                let cells = (s.instances[a].cell, s.instances[b].cell);
                if cells.0 == cells.1 {
                    return Err(LatticePathError::NotATree);
                }
                edges.push(DualEdge {
                    cells,
                    weight: s.instances[a].value,
                    direction: direction(a),
                });
            }
            _ => {
                let (end, inner) = if a_end { (a, b) } else { (b, a) };
                ends.push(DualEnd {
                    cell: s.instances[inner].cell,
                    instance: end,
                    facet: boundary[&end],
                    direction: direction(inner),
                });
            }
        }
    }
    if vertices.is_empty() || edges.len() + 1 != vertices.len() {
        return Err(LatticePathError::NotATree);
    }
    let mut cell_parent: Vec<usize> = (0..s.cells.len()).collect();
    for e in &edges {
        let (ra, rb) = (find(&mut cell_parent, e.cells.0), find(&mut cell_parent, e.cells.1));
        if ra == rb {
            return Err(LatticePathError::NotATree);
        }
        cell_parent[ra] = rb;
    }
    Ok(DualGraph { vertices, edges, ends })
}

/// The degree labels referenced by the cross-ratios.
fn referenced_labels(lambdas: &[DegCrossRatio]) -> Vec<usize> {
    let mut out: Vec<usize> = lambdas
        .iter()
        .flat_map(|l| l.refs())
        .filter_map(|r| match r {
            EndRef::EndLabel(t) => Some(t),
            EndRef::MarkedPoint(_) => None,
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// All assignments of end labels to the ends of `graph` that differ in
/// the labels referenced by the cross-ratios. On every facet the
/// referenced labels are placed injectively; the remaining labels of the
/// facet fill the other ends in order.
pub fn label_assignments(ctx: &LatticePathContext, graph: &DualGraph, lambdas: &[DegCrossRatio]) -> Vec<Vec<usize>> {
    let referenced = referenced_labels(lambdas);
    let mut out = vec![vec![0; graph.ends.len()]];
    for f in 0..ctx.facets().len() {
        let slots: Vec<usize> = (0..graph.ends.len()).filter(|&i| graph.ends[i].facet == f).collect();
        let labels: Vec<usize> = ctx.facet_labels(f).collect();
        let (fixed, rest): (Vec<usize>, Vec<usize>) = labels.iter().partition(|t| referenced.contains(t));
        let mut placements = Vec::new();
        injective_maps(fixed.len(), slots.len(), &mut Vec::new(), &mut placements);
        let mut next = Vec::with_capacity(out.len() * placements.len());
        for base in &out {
            for placement in &placements {
                let mut labels = base.clone();
                let mut used = vec![false; slots.len()];
                for (&t, &slot) in fixed.iter().zip(placement) {
                    labels[slots[slot]] = t;
                    used[slot] = true;
                }
                let free_slots = (0..slots.len()).filter(|&i| !used[i]);
                for (slot, &t) in free_slots.zip(&rest) {
                    labels[slots[slot]] = t;
                }
                next.push(labels);
            }
        }
        out = next;
    }
    out
}

fn injective_maps(k: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for i in 0..n {
        if !current.contains(&i) {
            current.push(i);
            injective_maps(k, n, current, out);
            current.pop();
        }
    }
}

/// A dual graph with its end labels, as a stable map. Node
/// `leaf_count + k` of the tree is the vertex dual to `cells[k]`.
#[derive(Debug, Clone)]
pub struct LabeledDual {
    pub graph: DualGraph,
    pub labels: Vec<usize>,
    pub cells: Vec<usize>,
    pub map: StableMap,
}

impl LabeledDual {
    pub fn new(
        ctx: &LatticePathContext,
        s: &LatticePathSubdivision,
        graph: DualGraph,
        labels: Vec<usize>,
    ) -> Result<Self, LatticePathError> {
        let n = s.path.point_count();
        let leaves = n + ctx.degree().len();
        let node_of: HashMap<usize, usize> = graph
            .vertices
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, leaves + k))
            .collect();
        let mut edges: Vec<(usize, usize)> = graph
            .edges
            .iter()
            .map(|e| (node_of[&e.cells.0], node_of[&e.cells.1]))
            .collect();
        for (end, &t) in graph.ends.iter().zip(&labels) {
            edges.push((node_of[&end.cell], n + t - 1));
        }
        for (c, cell) in s.cells.iter().enumerate() {
            if let Some(j) = cell.point {
                edges.push((node_of[&c], j - 1));
            }
        }
        let tree = MarkedTree::from_edges(leaves, leaves + graph.vertices.len(), edges)?;
        let map = StableMap::new(tree, ctx.degree().clone(), n)?;
        Ok(LabeledDual {
            cells: graph.vertices.clone(),
            graph,
            labels,
            map,
        })
    }

    /// The tree node dual to a cell.
    pub fn node(&self, cell: usize) -> Option<usize> {
        let leaves = self.map.tree().leaf_count();
        self.cells.iter().position(|&c| c == cell).map(|k| leaves + k)
    }

    pub fn cell(&self, node: usize) -> Option<usize> {
        node.checked_sub(self.map.tree().leaf_count())
            .and_then(|k| self.cells.get(k).copied())
    }
}

/// The sets `Λ(P, i)` of ends and marked points reached through each
/// branch at the vertex dual to a cell, and `Λ(P)`, the cross-ratios
/// whose four entries lie in four different branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellFit {
    pub cell: usize,
    pub marks: usize,
    pub branches: Vec<Vec<EndRef>>,
    pub lambdas: Vec<usize>,
}

/// The outcome of the fit check of a labeled dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FitReport {
    pub cells: Vec<CellFit>,
    pub fits: bool,
}

/// Checks that every `k`-marked cell carries exactly `k` cross-ratios and
/// that all cross-ratios are carried.
pub fn fit_check(
    s: &LatticePathSubdivision,
    dual: &LabeledDual,
    lambdas: &[DegCrossRatio],
) -> Result<FitReport, LatticePathError> {
    let tree = dual.map.tree();
    let mut cells = Vec::new();
    let mut total = 0;
    let mut fits = true;
    for &c in &dual.cells {
        let v = dual.node(c).expect("vertex cells have nodes");
        let branches = tree
            .branches(v)
            .map(|(_, _, mask)| {
                crcount_core::tree::mask_leaves(mask)
                    .map(|leaf| dual.map.leaf_ref(leaf))
                    .collect()
            })
            .collect();
        let at_v = dual.map.lambda_v(v, lambdas)?;
        let marks = s.cells[c].marks();
        fits &= at_v.len() == marks;
        total += at_v.len();
        cells.push(CellFit {
            cell: c,
            marks,
            branches,
            lambdas: at_v,
        });
    }
    fits &= total == lambdas.len();
    Ok(FitReport { cells, fits })
}

/// Nodes of the branch at `v` behind its neighbor `w`.
fn branch_nodes(tree: &MarkedTree, v: usize, w: usize) -> Vec<usize> {
    let mut seen = vec![false; tree.node_count()];
    seen[v] = true;
    seen[w] = true;
    let mut queue = VecDeque::from([w]);
    let mut out = Vec::new();
    while let Some(u) = queue.pop_front() {
        out.push(u);
        for &(x, _) in tree.neighbors(u) {
            if !seen[x] {
                seen[x] = true;
                queue.push_back(x);
            }
        }
    }
    out
}

/// The multiplicity of a fitting subdivision: the product over point-free
/// marked cells of `|det|` of the weighted directions of its two fixed
/// branches, times the resolution weight of the dual curve.
///
/// A branch is fixed when it has one more end (counting the edge to the
/// cell) than marked points and marks of its cells.
pub fn subdivision_multiplicity(
    s: &LatticePathSubdivision,
    dual: &LabeledDual,
    lambdas: &[DegCrossRatio],
) -> Result<u64, LatticePathError> {
    let tree = dual.map.tree();
    let n = dual.map.point_count();
    let leaves = tree.leaf_count();
    let mut ev = 1u64;
    for &c in &dual.cells {
        if s.cells[c].point.is_some() {
            continue;
        }
        let v = dual.node(c).expect("vertex cells have nodes");
        let mut fixed = Vec::new();
        for &(w, e) in tree.neighbors(v) {
            let nodes = branch_nodes(tree, v, w);
            let ends = nodes.iter().filter(|&&u| (n..leaves).contains(&u)).count() + 1;
            let points = nodes.iter().filter(|&&u| u < n).count();
            let marks: usize = nodes
                .iter()
                .filter_map(|&u| dual.cell(u))
                .map(|cell| s.cells[cell].marks())
                .sum();
            if ends == points + marks + 1 {
                fixed.push(dual.map.direction(e, v));
            }
        }
        let &[a, b] = fixed.as_slice() else {
            return Err(LatticePathError::FixedCount {
                cell: c,
                fixed: fixed.len(),
            });
        };
        ev *= a.det(b).unsigned_abs();
    }
    let omega = total_multiplicity(&dual.map, lambdas)?.resolution_part();
    Ok(ev * omega)
}

/// A stretched configuration of `n` points: on a line of small negative
/// slope, ordered like the marked points along a lattice path, with
/// geometrically growing gaps.
pub fn stretched_configuration(n: usize) -> Vec<RatPoint> {
    let ratio = BigInt::from(1000);
    let slope = BigInt::from(1_000_000);
    let mut step = BigInt::one();
    (0..n)
        .map(|_| {
            step *= &ratio;
            RatPoint::new(BigRational::from(&slope * &step), BigRational::from(-step.clone()))
        })
        .collect()
}

/// The dual curve with its metric: the unique curve of the dual type
/// through [`stretched_configuration`]. Fails if that curve would need a
/// nonpositive edge length.
pub fn dual_curve(dual: &LabeledDual) -> Result<StableMap, LatticePathError> {
    let map = &dual.map;
    let matrix = ev_ft_matrix(map, ExtraConditions::default())?;
    let bounded = map.tree().bounded_edges().count();
    let rhs: Vec<BigInt> = stretched_configuration(map.point_count())
        .into_iter()
        .flat_map(|p| [p.x.to_integer(), p.y.to_integer()])
        .collect();
    let solution = solve(&matrix, &rhs).ok_or(LatticePathError::NotRealizable)?;
    if !solution.all_positive(2..2 + bounded) {
        return Err(LatticePathError::NotRealizable);
    }
    let values = solution.values();
    let anchor = RatPoint::new(values[0].clone(), values[1].clone());
    Ok(map.clone().with_metric(anchor, values[2..].to_vec())?)
}
