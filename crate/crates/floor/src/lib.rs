//! Cross-ratio floor diagrams of degree Δ_d.
//!
//! For point conditions in a stretched configuration and degenerated
//! cross-ratios whose four entries are all marked points, every counted
//! curve is floor decomposed. Contracting its floors gives a cross-ratio
//! floor diagram, and the count of curves equals the weighted count of
//! diagrams. The weight of a diagram is a product of local counts, one
//! per floor, computed here with the brute-force oracle on small local
//! degrees.

mod count;
mod diagram;
mod enumerate;
mod piece;
mod reconstruct;

use thiserror::Error;

use crcount_core::{CoreError, EndRef, MultiplicityError};
use crcount_oracle::OracleError;

pub use count::{floor_count, floor_count_with, CountedDiagram, FloorCount};
pub use diagram::{
    label_class, validate_diagram, CrossRatioFloorDiagram, DiagramEdge, DiagramVertex, DiagramViolation,
    HalfEdge, LabelClass,
};
pub use enumerate::{enumerate_diagrams, DiagramClass};
pub use piece::{piece_multiplicity, DiagramPiece, PieceElevator, PieceRef, PieceSolver};
pub use reconstruct::{extract_diagram, reconstruct, verify_reconstruction, GluedCurve, Reconstruction};

#[derive(Debug, Error)]
pub enum FloorError {
    #[error("floor diagrams require 4-point cross-ratios")]
    NotFourPoint,
    #[error("condition count mismatch: {points} points and {lambdas} cross-ratios for degree {d}")]
    ConditionCountMismatch { d: u64, points: usize, lambdas: usize },
    #[error("unresolved reference {0}")]
    UnresolvedRef(EndRef),
    #[error("the degree Δ_d needs d >= 1")]
    ZeroDegree,
    #[error("label count overflows")]
    Overflow,
    #[error("invalid diagram: {0}")]
    Invalid(#[from] DiagramViolation),
    #[error("the diagram does not satisfy the cross-ratios")]
    NotSatisfied,
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Multiplicity(#[from] MultiplicityError),
}
