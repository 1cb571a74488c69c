//! Degrees of plane tropical curves: labeled multisets of end directions.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::lattice::{IntVec2, LatticePolytope};

/// One end direction of a degree with its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub vector: IntVec2,
    pub label: usize,
}

/// A labeled multiset of nonzero integer vectors summing to zero.
///
/// Labels are always `1..=len()` in entry order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Degree {
    entries: Vec<DegreeEntry>,
}

/// The named degree families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinDegree {
    /// Plane curves of degree `d`.
    DeltaD(u64),
    /// Curves in the Hirzebruch trapezoid with left contact orders `alpha`
    /// (summing to `b + s`) and right contact orders `beta` (summing to `b`).
    Hirzebruch {
        s: u64,
        b: u64,
        alpha: Vec<u64>,
        beta: Vec<u64>,
    },
}

impl Degree {
    /// A degree whose vectors span the plane.
    pub fn new(vectors: Vec<IntVec2>) -> Result<Self, CoreError> {
        let degree = Self::local(vectors)?;
        let spans = degree
            .entries
            .iter()
            .any(|a| degree.entries.iter().any(|b| a.vector.det(b.vector) != 0));
        if !spans {
            return Err(CoreError::NotSpanning);
        }
        Ok(degree)
    }

    /// A balanced family of nonzero vectors that may lie on a single line,
    /// as needed for local pieces that consist of horizontal ends only.
    pub fn local(vectors: Vec<IntVec2>) -> Result<Self, CoreError> {
        if vectors.is_empty() {
            return Err(CoreError::EmptyDegree);
        }
        if vectors.iter().any(|v| v.is_zero()) {
            return Err(CoreError::ZeroDirection);
        }
        let total: IntVec2 = vectors.iter().sum();
        if !total.is_zero() {
            return Err(CoreError::Unbalanced(total.x, total.y));
        }
        let entries = vectors
            .into_iter()
            .enumerate()
            .map(|(i, vector)| DegreeEntry {
                vector,
                label: i + 1,
            })
            .collect();
        Ok(Degree { entries })
    }

    pub fn entries(&self) -> &[DegreeEntry] {
        &self.entries
    }

    /// Number of ends `|Δ|`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The vector carrying `label`, if any.
    pub fn vector(&self, label: usize) -> Option<IntVec2> {
        label
            .checked_sub(1)
            .and_then(|i| self.entries.get(i))
            .map(|e| e.vector)
    }

    pub fn vectors(&self) -> impl Iterator<Item = IntVec2> + '_ {
        self.entries.iter().map(|e| e.vector)
    }
}

/// Builds the degree of a polygon whose facets carry the given partitions.
///
/// Facets are taken in label order (see
/// [`LatticePolytope::facets_in_label_order`]); every part `e` of the
/// partition of facet `E` contributes the vector `e` times the outward
/// primitive normal of `E`, and labels are assigned consecutively.
pub fn degree_from_polytope(
    polytope: &LatticePolytope,
    partitions: &[Vec<u64>],
) -> Result<Degree, CoreError> {
    if polytope.dimension() != 2 {
        return Err(CoreError::DegeneratePolytope);
    }
    let facets = polytope.facets_in_label_order();
    if facets.len() != partitions.len() {
        return Err(CoreError::PartitionCount {
            expected: facets.len(),
            got: partitions.len(),
        });
    }
    let mut vectors = Vec::new();
    for (i, (facet, parts)) in facets.iter().zip(partitions).enumerate() {
        if parts.contains(&0) {
            return Err(CoreError::ZeroPart);
        }
        let sum: u64 = parts.iter().sum();
        if sum != facet.length {
            return Err(CoreError::PartitionSum {
                facet: i,
                sum,
                length: facet.length,
            });
        }
        vectors.extend(parts.iter().map(|&e| facet.normal * e as i64));
    }
    Degree::new(vectors)
}

/// Unit partitions for every facet of a polygon, in label order.
pub fn unit_partitions(polytope: &LatticePolytope) -> Vec<Vec<u64>> {
    polytope
        .facets_in_label_order()
        .iter()
        .map(|f| vec![1; f.length as usize])
        .collect()
}

/// Builds one of the named degree families.
pub fn builtin_degree(kind: &BuiltinDegree) -> Result<Degree, CoreError> {
    match kind {
        BuiltinDegree::DeltaD(d) => {
            let triangle = LatticePolytope::standard_triangle(*d)?;
            degree_from_polytope(&triangle, &unit_partitions(&triangle))
        }
        BuiltinDegree::Hirzebruch { s, b, alpha, beta } => {
            let trapezoid = LatticePolytope::hirzebruch(*s, *b)?;
            let ones = vec![1; *s as usize];
            let mut partitions = vec![alpha.clone()];
            if *b > 0 {
                partitions.push(beta.clone());
            } else if !beta.is_empty() {
                return Err(CoreError::PartitionSum {
                    facet: 1,
                    sum: beta.iter().sum(),
                    length: 0,
                });
            }
            partitions.push(ones.clone());
            partitions.push(ones);
            degree_from_polytope(&trapezoid, &partitions)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_three_labels() {
        let deg = builtin_degree(&BuiltinDegree::DeltaD(3)).unwrap();
        assert_eq!(deg.len(), 9);
        for t in 1..=3 {
            assert_eq!(deg.vector(t), Some(IntVec2::new(-1, 0)));
            assert_eq!(deg.vector(t + 3), Some(IntVec2::new(0, -1)));
            assert_eq!(deg.vector(t + 6), Some(IntVec2::new(1, 1)));
        }
    }

    #[test]
    fn hirzebruch_example() {
        let deg = builtin_degree(&BuiltinDegree::Hirzebruch {
            s: 1,
            b: 1,
            alpha: vec![2],
            beta: vec![1],
        })
        .unwrap();
        let vs: Vec<_> = deg.vectors().collect();
        assert_eq!(
            vs,
            vec![
                IntVec2::new(-2, 0),
                IntVec2::new(1, 0),
                IntVec2::new(0, -1),
                IntVec2::new(1, 1)
            ]
        );
    }

    #[test]
    fn hirzebruch_without_right_side_is_a_triangle() {
        let h = builtin_degree(&BuiltinDegree::Hirzebruch {
            s: 1,
            b: 0,
            alpha: vec![1],
            beta: vec![],
        })
        .unwrap();
        assert_eq!(h, builtin_degree(&BuiltinDegree::DeltaD(1)).unwrap());
    }

    #[test]
    fn partition_mismatch_is_rejected() {
        let t = LatticePolytope::standard_triangle(2).unwrap();
        let err = degree_from_polytope(&t, &[vec![1], vec![1, 1], vec![2]]).unwrap_err();
        assert!(matches!(err, CoreError::PartitionSum { facet: 0, .. }));
        let flat = LatticePolytope::hull([IntVec2::new(0, 0), IntVec2::new(2, 0)]).unwrap();
        assert_eq!(
            degree_from_polytope(&flat, &[]).unwrap_err(),
            CoreError::DegeneratePolytope
        );
    }

    #[test]
    fn local_degree_may_be_collinear() {
        assert!(Degree::local(vec![IntVec2::new(-2, 0), IntVec2::new(2, 0)]).is_ok());
        assert_eq!(
            Degree::new(vec![IntVec2::new(-2, 0), IntVec2::new(2, 0)]).unwrap_err(),
            CoreError::NotSpanning
        );
    }
}
