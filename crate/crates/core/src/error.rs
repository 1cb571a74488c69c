use thiserror::Error;

use crate::cross_ratio::EndRef;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("zero direction")]
    ZeroDirection,
    #[error("empty point set has no convex hull")]
    EmptyPolytope,
    #[error("polytope is not two-dimensional")]
    DegeneratePolytope,
    #[error("expected {expected} facet partitions, got {got}")]
    PartitionCount { expected: usize, got: usize },
    #[error("partition of facet {facet} sums to {sum}, facet has lattice length {length}")]
    PartitionSum { facet: usize, sum: u64, length: u64 },
    #[error("partition entries must be positive")]
    ZeroPart,
    #[error("degree vectors sum to ({0},{1}) instead of zero")]
    Unbalanced(i64, i64),
    #[error("degree vectors do not span the plane")]
    NotSpanning,
    #[error("degree is empty")]
    EmptyDegree,
    #[error("unresolved reference {0}")]
    UnresolvedRef(EndRef),
    #[error("cross-ratio repeats the reference {0}")]
    RepeatedRef(EndRef),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("too many leaves ({0}); at most 64 are supported")]
    TooManyLeaves(usize),
    #[error("bounded edge {0} has no length")]
    MissingLength(usize),
    #[error("curve has no anchor position")]
    MissingAnchor,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiplicityError {
    #[error("condition count mismatch: {rows} conditions for {cols} unknowns")]
    ConditionCountMismatch { rows: usize, cols: usize },
    #[error("not fixed by conditions at vertex {vertex}: branch has {ends} ends and {constraints} constraints")]
    NotFixed {
        vertex: usize,
        ends: usize,
        constraints: usize,
    },
    #[error("vertex {vertex} has {fixed} fixed components instead of two")]
    FixedCount { vertex: usize, fixed: usize },
    #[error("valence {valence} does not match {lambdas} cross-ratios at the vertex")]
    ValenceMismatch { valence: usize, lambdas: usize },
    #[error("cross-ratios are not distributed over vertices consistently")]
    InvalidConstrainedType,
    #[error(transparent)]
    Core(#[from] CoreError),
}
