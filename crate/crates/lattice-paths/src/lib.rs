//! The cross-ratio lattice path algorithm for counting rational tropical
//! curves of degree `Δ(Σ)` through points in a stretched configuration
//! that satisfy degenerated cross-ratios.
//!
//! A count runs in four stages: enumerate the cross-ratio lattice paths
//! in `Σ` ([`enumerate_paths`]), complete each path to subdivisions of `Σ`
//! by valid Minkowski labeled polytopes ([`complete_subdivisions`]), keep
//! the subdivisions whose dual curve fits the cross-ratios for some
//! assignment of end labels ([`fit_check`]), and add up their
//! multiplicities ([`subdivision_multiplicity`]). [`lpa_count`] runs the
//! whole pipeline and collapses duplicate dual curves.

mod coloring;
mod context;
mod count;
mod dual;
mod path;
mod polytope;
mod subdivision;
mod theta;

use thiserror::Error;

use crcount_core::{CoreError, EndRef, MultiplicityError};

pub use coloring::{adjust_colors, Color, LabelInstance, Summand};
pub use context::LatticePathContext;
pub use count::{lpa_count, CountedCurve, LpaCount};
pub use dual::{
    dual_curve, dual_graph, stretched_configuration, fit_check, label_assignments, subdivision_multiplicity, DualEdge, DualEnd, DualGraph,
    CellFit, FitReport, LabeledDual,
};
pub use path::{enumerate_paths, CrossRatioLatticePath, PathMember, PathStep};
pub use polytope::{
    convex_polygons, merge, minkowski_structures, on_boundary, partitions, CellEdge, Labeling, MinkowskiPolytope,
    PolygonIndex, SegmentCell,
};
pub use subdivision::{complete_subdivisions, BoundaryEnd, Cell, CellShape, LatticePathSubdivision};
pub use theta::{is_theta_increasing, theta_compare, theta_extremes, turn, Turn};

#[derive(Debug, Error)]
pub enum LatticePathError {
    #[error("degenerate polygon: the lattice path algorithm needs a two-dimensional Σ")]
    Degenerate,
    #[error("condition count mismatch: {points} points and {lambdas} cross-ratios for {ends} ends")]
    ConditionCountMismatch { points: usize, lambdas: usize, ends: usize },
    #[error("unresolved reference {0}")]
    UnresolvedRef(EndRef),
    #[error("the dual graph is reducible")]
    Reducible,
    #[error("the dual graph has a loop or is not a tree")]
    NotATree,
    #[error("{fixed} fixed branches at the point-free cell {cell}")]
    FixedCount { cell: usize, fixed: usize },
    #[error("the dual curve through the stretched configuration needs a nonpositive edge length")]
    NotRealizable,
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Multiplicity(#[from] MultiplicityError),
}
