//! Exact building blocks for counting rational tropical plane curves:
//! lattice geometry, degrees, leaf-labeled trees, stable maps, cross-ratio
//! conditions and multiplicities.

pub mod cross_ratio;
pub mod curve;
pub mod degree;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod multiplicity;
pub mod tree;

pub use cross_ratio::{CrossRatio, DegCrossRatio, EndRef, Pairing};
pub use curve::{CanonicalType, FloorDecomposition, RatPoint, StableMap};
pub use degree::{builtin_degree, degree_from_polytope, BuiltinDegree, Degree, DegreeEntry};
pub use error::{CoreError, MultiplicityError};
pub use lattice::{lattice_length, primitive_direction, IntVec2, LatticePolytope};
pub use multiplicity::{
    classify_components, ev_ft_det, ev_ft_matrix, local_ev_mult, local_resolution_weight,
    theta_matrix, theta_matrix_det, total_multiplicity, ComponentClass, ComponentKind,
    ExtraConditions, MultiplicityBreakdown,
};
pub use tree::{LeafMask, MarkedTree};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
