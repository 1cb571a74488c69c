//! Cross-ratio lattice paths: chains of pointed and non-pointed segments
//! and point-carrying polygons from the `θ`-minimal to the `θ`-maximal
//! vertex of `Σ`.

use serde::Serialize;

use crcount_core::{lattice_length, IntVec2};

use crate::context::LatticePathContext;
use crate::polytope::{partitions, CellEdge, Labeling, MinkowskiPolytope, SegmentCell};
use crate::theta::theta_compare;

/// One member of a cross-ratio lattice path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum PathMember {
    /// A pointed segment (carrying a marked point) or a free non-pointed
    /// segment.
    Segment(SegmentCell),
    /// A valid polytope with fixed two-dimensional `P̃`, carrying a
    /// marked point at its dual vertex.
    Polygon(MinkowskiPolytope),
}

/// A step of `γ₊` or `γ₋`: an edge of a member, traversed in the
/// `θ`-increasing direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub start: IntVec2,
    pub end: IntVec2,
    /// Index of the edge (or side) within the member.
    pub edge: usize,
}

impl PathMember {
    pub fn start(&self) -> IntVec2 {
        match self {
            PathMember::Segment(s) => s.start,
            PathMember::Polygon(p) => p.theta_min(),
        }
    }

    pub fn end(&self) -> IntVec2 {
        match self {
            PathMember::Segment(s) => s.end,
            PathMember::Polygon(p) => p.theta_max(),
        }
    }

    /// Whether the member carries a marked point.
    pub fn is_pointed(&self) -> bool {
        match self {
            PathMember::Segment(s) => s.is_pointed(),
            PathMember::Polygon(_) => true,
        }
    }

    pub fn marks(&self) -> usize {
        match self {
            PathMember::Segment(s) => s.marks(),
            PathMember::Polygon(p) => p.marks(true),
        }
        .unwrap_or(0)
    }

    /// Counterclockwise edges; a segment has its lower side first.
    pub fn edges(&self) -> Vec<CellEdge> {
        match self {
            PathMember::Segment(s) => vec![s.side(0), s.side(1)],
            PathMember::Polygon(p) => p.edges().to_vec(),
        }
    }

    /// The member's contribution to `γ₋`.
    pub fn lower_steps(&self) -> Vec<PathStep> {
        match self {
            PathMember::Segment(s) => vec![PathStep {
                start: s.start,
                end: s.end,
                edge: 0,
            }],
            PathMember::Polygon(p) => p
                .lower_chain()
                .iter()
                .enumerate()
                .map(|(i, e)| PathStep {
                    start: e.start,
                    end: e.end,
                    edge: i,
                })
                .collect(),
        }
    }

    /// The member's contribution to `γ₊`.
    pub fn upper_steps(&self) -> Vec<PathStep> {
        match self {
            PathMember::Segment(s) => vec![PathStep {
                start: s.start,
                end: s.end,
                edge: 1,
            }],
            PathMember::Polygon(p) => {
                let lower = p.lower_len();
                p.upper_chain()
                    .iter()
                    .enumerate()
                    .rev()
                    .map(|(i, e)| PathStep {
                        start: e.end,
                        end: e.start,
                        edge: lower + i,
                    })
                    .collect()
            }
        }
    }
}

/// An ordered set of polytopes forming a cross-ratio lattice path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CrossRatioLatticePath {
    pub members: Vec<PathMember>,
}

impl CrossRatioLatticePath {
    /// Number of members carrying marked points.
    pub fn point_count(&self) -> usize {
        self.members.iter().filter(|m| m.is_pointed()).count()
    }

    /// Number of free non-pointed segments.
    pub fn free_count(&self) -> usize {
        self.members.len() - self.point_count()
    }

    pub fn marks(&self) -> usize {
        self.members.iter().map(PathMember::marks).sum()
    }

    /// For each member, the 1-based index of its marked point.
    pub fn point_labels(&self) -> Vec<Option<usize>> {
        let mut next = 0;
        self.members
            .iter()
            .map(|m| {
                m.is_pointed().then(|| {
                    next += 1;
                    next
                })
            })
            .collect()
    }

    /// `(member, step)` pairs of `γ₊` in order.
    pub fn upper_path(&self) -> Vec<(usize, PathStep)> {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(k, m)| m.upper_steps().into_iter().map(move |s| (k, s)))
            .collect()
    }

    /// `(member, step)` pairs of `γ₋` in order.
    pub fn lower_path(&self) -> Vec<(usize, PathStep)> {
        self.members
            .iter()
            .enumerate()
            .flat_map(|(k, m)| m.lower_steps().into_iter().map(move |s| (k, s)))
            .collect()
    }
}

/// All cross-ratio lattice paths in `Σ` with `points` pointed members and
/// at most `marks` marks in total, for every number of free segments up
/// to the number of lattice points of `Σ`.
pub fn enumerate_paths(ctx: &LatticePathContext, points: usize, marks: usize) -> Vec<CrossRatioLatticePath> {
    let mut lattice = ctx.sigma().lattice_points();
    lattice.sort_by(|a, b| theta_compare(*a, *b));
    let search = PathSearch {
        ctx,
        lattice: &lattice,
        points,
        marks,
        max_free: lattice.len(),
    };
    let mut out = Vec::new();
    search.extend(ctx.theta_min(), &mut Vec::new(), 0, 0, 0, &mut out);
    out
}

struct PathSearch<'a> {
    ctx: &'a LatticePathContext,
    lattice: &'a [IntVec2],
    points: usize,
    marks: usize,
    max_free: usize,
}

impl PathSearch<'_> {
    fn labelings(&self, length: u64, boundary: bool) -> Vec<Labeling> {
        if boundary {
            vec![vec![1; length as usize]]
        } else {
            partitions(length)
        }
    }

    fn extend(
        &self,
        at: IntVec2,
        members: &mut Vec<PathMember>,
        points: usize,
        marks: usize,
        free: usize,
        out: &mut Vec<CrossRatioLatticePath>,
    ) {
        if at == self.ctx.theta_max() {
            if points == self.points {
                out.push(CrossRatioLatticePath {
                    members: members.clone(),
                });
            }
            return;
        }
        let later: Vec<IntVec2> = self
            .lattice
            .iter()
            .copied()
            .filter(|&b| theta_compare(at, b).is_lt())
            .collect();
        if later.len() < self.points - points {
            return;
        }
        let mut push = |member: PathMember, members: &mut Vec<PathMember>| {
            let pointed = member.is_pointed();
            let (next_points, next_free) = (points + usize::from(pointed), free + usize::from(!pointed));
            let next_marks = marks + member.marks();
            if next_points > self.points || next_free > self.max_free || next_marks > self.marks {
                return;
            }
            let end = member.end();
            members.push(member);
            self.extend(end, members, next_points, next_marks, next_free, out);
            members.pop();
        };
        for &b in &later {
            let length = lattice_length(at, b);
            let boundary = self.ctx.on_boundary(at, b);
            for segments in self.labelings(length, boundary) {
                let cell = SegmentCell {
                    start: at,
                    end: b,
                    lower_tilde: Vec::new(),
                    upper_tilde: Vec::new(),
                    segments,
                };
                push(PathMember::Segment(cell), members);
            }
            for tilde in 1..=length {
                for lower_tilde in self.labelings(tilde, boundary) {
                    for upper_tilde in self.labelings(tilde, boundary) {
                        for segments in self.labelings(length - tilde, boundary) {
                            let cell = SegmentCell {
                                start: at,
                                end: b,
                                lower_tilde: lower_tilde.clone(),
                                upper_tilde: upper_tilde.clone(),
                                segments,
                            };
                            push(PathMember::Segment(cell), members);
                        }
                    }
                }
            }
        }
        let polygons: Vec<MinkowskiPolytope> = self
            .ctx
            .index()
            .starting_at(at)
            .filter(|p| p.tilde_dimension() == 2)
            .cloned()
            .collect();
        for p in polygons {
            push(PathMember::Polygon(p), members);
        }
    }
}
