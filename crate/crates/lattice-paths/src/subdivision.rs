//! Completing a cross-ratio lattice path to subdivisions of `Σ` by
//! repeatedly filling the first left turn of `γ₊` (and, in the rotated
//! polygon, the first right turn of `γ₋`) with a valid polytope.

use serde::Serialize;

use crcount_core::IntVec2;

use crate::coloring::{adjust_colors, Color, LabelInstance, Summand};
use crate::context::{LatticePathContext, SideView};
use crate::dual::dual_graph;
use crate::path::{CrossRatioLatticePath, PathMember};
use crate::polytope::{on_boundary, CellEdge, MinkowskiPolytope};
use crate::theta::{turn, Turn};

/// The shape of a cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum CellShape {
    Segment(crate::polytope::SegmentCell),
    Polygon(MinkowskiPolytope),
}

/// A cell of a lattice path subdivision.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cell {
    pub shape: CellShape,
    /// Position in the lattice path, for members of the path.
    pub member: Option<usize>,
    /// 1-based index of the marked point carried by the cell.
    pub point: Option<usize>,
}

impl Cell {
    fn from_member(member: &PathMember, index: usize, point: Option<usize>) -> Self {
        let shape = match member {
            PathMember::Segment(s) => CellShape::Segment(s.clone()),
            PathMember::Polygon(p) => CellShape::Polygon(p.clone()),
        };
        Cell {
            shape,
            member: Some(index),
            point,
        }
    }

    /// Counterclockwise edges; a segment has its lower side first.
    pub fn edges(&self) -> Vec<CellEdge> {
        match &self.shape {
            CellShape::Segment(s) => vec![s.side(0), s.side(1)],
            CellShape::Polygon(p) => p.edges().to_vec(),
        }
    }

    /// Whether the cell is dual to a vertex of the curve.
    pub fn has_vertex(&self) -> bool {
        match &self.shape {
            CellShape::Segment(s) => s.is_pointed(),
            CellShape::Polygon(p) => p.tilde_dimension() == 2,
        }
    }

    pub fn marks(&self) -> usize {
        match &self.shape {
            CellShape::Segment(s) => s.marks(),
            CellShape::Polygon(p) => p.marks(self.point.is_some()),
        }
        .unwrap_or(0)
    }

    pub fn vertices(&self) -> Vec<IntVec2> {
        match &self.shape {
            CellShape::Segment(s) => vec![s.start, s.end],
            CellShape::Polygon(p) => p.vertices().to_vec(),
        }
    }
}

/// A label on `∂Σ` and the facet it lies on; its dual is an end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryEnd {
    pub instance: usize,
    pub facet: usize,
}

/// A subdivision of `Σ` into the members of a cross-ratio lattice path and
/// filling polytopes, with every shared edge glued label by label
/// (value-preserving) and the colors adjusted to their fixpoint.
#[derive(Debug, Clone, Serialize)]
pub struct LatticePathSubdivision {
    pub path: CrossRatioLatticePath,
    pub cells: Vec<Cell>,
    pub instances: Vec<LabelInstance>,
    pub gluings: Vec<(usize, usize)>,
    pub boundary: Vec<BoundaryEnd>,
    pub colors: Vec<Color>,
}

impl LatticePathSubdivision {
    pub fn marks(&self) -> usize {
        self.cells.iter().map(Cell::marks).sum()
    }

    pub fn is_fixed(&self) -> bool {
        self.colors.iter().all(|&c| c == Color::Fixed)
    }

    /// Outward primitive normal of the edge carrying an instance.
    pub fn normal(&self, instance: usize) -> IntVec2 {
        let inst = &self.instances[instance];
        self.cells[inst.cell].edges()[inst.edge].normal()
    }
}

/// Instances of one cell, per edge in counterclockwise order.
fn instantiate(
    cell: usize,
    edges: &[CellEdge],
    partner: impl Fn(usize) -> Option<usize>,
    instances: &mut Vec<LabelInstance>,
    first_id: usize,
) -> Vec<Vec<usize>> {
    let mut per_edge = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        let mut ids = Vec::new();
        for &value in &e.tilde {
            ids.push(first_id + instances.len());
            instances.push(LabelInstance {
                cell,
                edge: i,
                value,
                summand: Summand::Tilde,
            });
        }
        let class = partner(i).map_or(i, |j| i.min(j));
        for (k, &value) in e.segments.iter().enumerate() {
            ids.push(first_id + instances.len());
            instances.push(LabelInstance {
                cell,
                edge: i,
                value,
                summand: Summand::Segment(class << 16 | k),
            });
        }
        per_edge.push(ids);
    }
    per_edge
}

#[derive(Debug, Clone)]
struct FrontierEdge {
    start: IntVec2,
    end: IntVec2,
    instances: Vec<usize>,
}

impl FrontierEdge {
    fn vector(&self) -> IntVec2 {
        self.end - self.start
    }
}

/// The fills of one side, in that side's coordinates. Instance ids below
/// `base` refer to path instances; larger ids to `instances[id - base]`.
#[derive(Debug, Clone, Default)]
struct SideCompletion {
    cells: Vec<MinkowskiPolytope>,
    instances: Vec<LabelInstance>,
    gluings: Vec<(usize, usize)>,
    boundary: Vec<(usize, IntVec2, IntVec2)>,
    marks: usize,
}

struct SideSearch<'a> {
    side: SideView<'a>,
    base: usize,
    path_values: &'a [u64],
    max_marks: usize,
}

impl SideSearch<'_> {
    fn value(&self, state: &SideCompletion, id: usize) -> u64 {
        if id < self.base {
            self.path_values[id]
        } else {
            state.instances[id - self.base].value
        }
    }

    fn run(&self, frontier: Vec<FrontierEdge>, state: SideCompletion, out: &mut Vec<SideCompletion>) {
        let first_left = (0..frontier.len().saturating_sub(1))
            .find(|&i| turn(frontier[i].vector(), frontier[i + 1].vector()) == Turn::Left);
        let Some(j) = first_left else {
            if frontier
                .iter()
                .all(|e| on_boundary(self.side.polytope, e.start, e.end))
            {
                let mut done = state;
                for e in &frontier {
                    for &id in &e.instances {
                        done.boundary.push((id, e.start, e.end));
                    }
                }
                out.push(done);
            }
            return;
        };
        let mut chain = vec![frontier[j].start, frontier[j].end];
        let mut k = j + 1;
        while k < frontier.len() && turn(frontier[k - 1].vector(), frontier[k].vector()) == Turn::Left {
            chain.push(frontier[k].end);
            for polygon in self.side.index.with_lower_chain(&chain) {
                self.fill(&frontier, j, k, polygon, &state, out);
            }
            k += 1;
        }
    }

    /// Fills frontier edges `j..=k` with the lower chain of `polygon`.
    fn fill(
        &self,
        frontier: &[FrontierEdge],
        j: usize,
        k: usize,
        polygon: &MinkowskiPolytope,
        state: &SideCompletion,
        out: &mut Vec<SideCompletion>,
    ) {
        let Some(marks) = polygon.marks(false) else {
            return;
        };
        if state.marks + marks > self.max_marks {
            return;
        }
        let lower = &polygon.edges()[..=k - j];
        for (e, f) in lower.iter().zip(&frontier[j..=k]) {
            let mut values: Vec<u64> = f.instances.iter().map(|&id| self.value(state, id)).collect();
            values.sort_unstable();
            if values != e.labeling() {
                return;
            }
        }
        let splits: Vec<Vec<(Vec<usize>, Vec<usize>)>> = lower
            .iter()
            .zip(&frontier[j..=k])
            .map(|(e, f)| self.splits(state, &f.instances, &e.tilde))
            .collect();
        let mut pick = vec![0usize; splits.len()];
        loop {
            let chosen: Vec<&(Vec<usize>, Vec<usize>)> =
                splits.iter().zip(&pick).map(|(s, &p)| &s[p]).collect();
            self.apply(frontier, j, k, polygon, marks, &chosen, state, out);
            let mut c = 0;
            loop {
                if c == pick.len() {
                    return;
                }
                pick[c] += 1;
                if pick[c] < splits[c].len() {
                    break;
                }
                pick[c] = 0;
                c += 1;
            }
        }
    }

    /// The ways to send frontier instances to `P̃` (values `tilde`) and to
    /// segments (the rest), each list sorted by value. Instances of equal
    /// value sent to segments are matched to them in every order.
    fn splits(&self, state: &SideCompletion, ids: &[usize], tilde: &[u64]) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut by_value: Vec<(u64, Vec<usize>)> = Vec::new();
        for &id in ids {
            let v = self.value(state, id);
            match by_value.iter_mut().find(|(w, _)| *w == v) {
                Some((_, list)) => list.push(id),
                None => by_value.push((v, vec![id])),
            }
        }
        by_value.sort_unstable_by_key(|(v, _)| *v);
        let mut out = vec![(Vec::new(), Vec::new())];
        for (v, list) in &by_value {
            let want = tilde.iter().filter(|&&t| t == *v).count();
            let mut next = Vec::new();
            for subset in combinations(list.len(), want) {
                let (to_tilde, rest): (Vec<usize>, Vec<usize>) =
                    (0..list.len()).partition(|i| subset.contains(i));
                for order in permutations(&rest) {
                    for (t, s) in &out {
                        let mut t = t.clone();
                        let mut s = s.clone();
                        t.extend(to_tilde.iter().map(|&i| list[i]));
                        s.extend(order.iter().map(|&i| list[i]));
                        next.push((t, s));
                    }
                }
            }
            out = next;
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn apply(
        &self,
        frontier: &[FrontierEdge],
        j: usize,
        k: usize,
        polygon: &MinkowskiPolytope,
        marks: usize,
        chosen: &[&(Vec<usize>, Vec<usize>)],
        state: &SideCompletion,
        out: &mut Vec<SideCompletion>,
    ) {
        let mut next = state.clone();
        let cell = next.cells.len();
        next.cells.push(polygon.clone());
        next.marks += marks;
        let first_id = self.base + next.instances.len();
        let mut fresh = Vec::new();
        let per_edge = instantiate(
            cell,
            polygon.edges(),
            |i| polygon.partner(i),
            &mut fresh,
            first_id,
        );
        next.instances.extend(fresh);
        for (i, (to_tilde, to_segments)) in chosen.iter().enumerate() {
            let own = &per_edge[i];
            let n_tilde = polygon.edges()[i].tilde.len();
            for (&a, &b) in to_tilde.iter().zip(&own[..n_tilde]) {
                next.gluings.push((a, b));
            }
            for (&a, &b) in to_segments.iter().zip(&own[n_tilde..]) {
                next.gluings.push((a, b));
            }
        }
        let m = polygon.edges().len();
        let new_edges = (polygon.lower_len()..m).rev().map(|u| {
            let e = &polygon.edges()[u];
            FrontierEdge {
                start: e.end,
                end: e.start,
                instances: per_edge[u].clone(),
            }
        });
        let frontier: Vec<FrontierEdge> = frontier[..j]
            .iter()
            .cloned()
            .chain(new_edges)
            .chain(frontier[k + 1..].iter().cloned())
            .collect();
        self.run(frontier, next, out);
    }
}

/// All orderings of `items`.
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let rest: Vec<usize> = items.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// All `want`-element subsets of `0..n`.
fn combinations(n: usize, want: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, want: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == want {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, want, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, want, &mut Vec::new(), &mut out);
    out
}

/// All lattice path subdivisions of `path` whose cells carry at most
/// `max_marks` marks, all polytopes end fixed and the dual curve is
/// connected of genus zero.
pub fn complete_subdivisions(
    ctx: &LatticePathContext,
    path: &CrossRatioLatticePath,
    max_marks: usize,
) -> Vec<LatticePathSubdivision> {
    let point_labels = path.point_labels();
    let mut cells = Vec::new();
    let mut instances = Vec::new();
    let mut member_edges = Vec::new();
    for (k, member) in path.members.iter().enumerate() {
        cells.push(Cell::from_member(member, k, point_labels[k]));
        let edges = member.edges();
        let per_edge = match member {
            PathMember::Segment(_) => instantiate(k, &edges, |i| Some(1 - i), &mut instances, 0),
            PathMember::Polygon(p) => instantiate(k, &edges, |i| p.partner(i), &mut instances, 0),
        };
        member_edges.push(per_edge);
    }
    let base = instances.len();
    let path_values: Vec<u64> = instances.iter().map(|i| i.value).collect();
    let path_marks = path.marks();
    if path_marks > max_marks {
        return Vec::new();
    }
    let budget = max_marks - path_marks;

    let upper_frontier: Vec<FrontierEdge> = path
        .upper_path()
        .into_iter()
        .map(|(m, s)| FrontierEdge {
            start: s.start,
            end: s.end,
            instances: member_edges[m][s.edge].clone(),
        })
        .collect();
    let lower_frontier: Vec<FrontierEdge> = path
        .lower_path()
        .into_iter()
        .rev()
        .map(|(m, s)| FrontierEdge {
            start: -s.end,
            end: -s.start,
            instances: member_edges[m][s.edge].clone(),
        })
        .collect();

    let search = |upper: bool, frontier: Vec<FrontierEdge>| {
        let s = SideSearch {
            side: ctx.side(upper),
            base,
            path_values: &path_values,
            max_marks: budget,
        };
        let mut out = Vec::new();
        s.run(frontier, SideCompletion::default(), &mut out);
        out
    };
    let uppers = search(true, upper_frontier);
    if uppers.is_empty() {
        return Vec::new();
    }
    let lowers = search(false, lower_frontier);

    let mut out = Vec::new();
    for up in &uppers {
        for low in &lowers {
            if up.marks + low.marks > budget {
                continue;
            }
            let s = assemble(ctx, path, &cells, &instances, up, low);
            if s.is_fixed() && dual_graph(&s).is_ok() {
                out.push(s);
            }
        }
    }
    out
}

fn assemble(
    ctx: &LatticePathContext,
    path: &CrossRatioLatticePath,
    path_cells: &[Cell],
    path_instances: &[LabelInstance],
    up: &SideCompletion,
    low: &SideCompletion,
) -> LatticePathSubdivision {
    let base = path_instances.len();
    let (up_cells, up_ids) = (path_cells.len(), up.instances.len());
    let mut cells = path_cells.to_vec();
    let mut instances = path_instances.to_vec();
    let mut gluings = Vec::new();
    let mut boundary = Vec::new();

    cells.extend(up.cells.iter().map(|p| Cell {
        shape: CellShape::Polygon(p.clone()),
        member: None,
        point: None,
    }));
    instances.extend(up.instances.iter().map(|i| LabelInstance {
        cell: i.cell + up_cells,
        ..*i
    }));
    gluings.extend(up.gluings.iter().copied());
    for &(id, a, b) in &up.boundary {
        let facet = ctx.facet_of(a, b).expect("completed edges lie on the boundary");
        boundary.push(BoundaryEnd { instance: id, facet });
    }

    let low_cells = cells.len();
    let remap = |id: usize| if id < base { id } else { id + up_ids };
    let mut shifts = Vec::new();
    for p in &low.cells {
        let (q, shift) = p.negated();
        shifts.push((shift, q.edges().len()));
        cells.push(Cell {
            shape: CellShape::Polygon(q),
            member: None,
            point: None,
        });
    }
    instances.extend(low.instances.iter().map(|i| {
        let (shift, m) = shifts[i.cell];
        LabelInstance {
            cell: i.cell + low_cells,
            edge: (i.edge + m - shift) % m,
            ..*i
        }
    }));
    gluings.extend(low.gluings.iter().map(|&(a, b)| (remap(a), remap(b))));
    for &(id, a, b) in &low.boundary {
        let facet = ctx.facet_of(-a, -b).expect("completed edges lie on the boundary");
        boundary.push(BoundaryEnd {
            instance: remap(id),
            facet,
        });
    }

    let mut colors: Vec<Color> = instances
        .iter()
        .map(|i| {
            if i.summand == Summand::Tilde && cells[i.cell].member.is_some() {
                Color::Fixed
            } else {
                Color::Free
            }
        })
        .collect();
    adjust_colors(&instances, &gluings, &mut colors);
    LatticePathSubdivision {
        path: path.clone(),
        cells,
        instances,
        gluings,
        boundary,
        colors,
    }
}
