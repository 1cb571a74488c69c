//! The fixed data of a counting problem on a polygon `Σ`: its degree,
//! boundary facets and the precomputed valid polytopes.

use std::ops::RangeInclusive;

use crcount_core::lattice::Facet;
use crcount_core::{degree_from_polytope, Degree, IntVec2, LatticePolytope};

use crate::polytope::{on_boundary, PolygonIndex};
use crate::theta::theta_extremes;
use crate::LatticePathError;

/// `Σ`, its degree with unit boundary partitions, and the valid polytopes
/// inside `Σ` and inside `−Σ` (the lower half of a path is completed in
/// the rotated polygon).
#[derive(Debug, Clone)]
pub struct LatticePathContext {
    sigma: LatticePolytope,
    negated: LatticePolytope,
    index: PolygonIndex,
    negated_index: PolygonIndex,
    degree: Degree,
    facets: Vec<Facet>,
    label_offsets: Vec<usize>,
    extremes: (IntVec2, IntVec2),
}

/// One half of `Σ` as seen by the completion search.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SideView<'a> {
    pub polytope: &'a LatticePolytope,
    pub index: &'a PolygonIndex,
}

impl LatticePathContext {
    pub fn new(sigma: LatticePolytope) -> Result<Self, LatticePathError> {
        if sigma.dimension() < 2 {
            return Err(LatticePathError::Degenerate);
        }
        let facets = sigma.facets_in_label_order();
        let partitions: Vec<Vec<u64>> = facets.iter().map(|f| vec![1; f.length as usize]).collect();
        let degree = degree_from_polytope(&sigma, &partitions)?;
        let mut label_offsets = Vec::with_capacity(facets.len());
        let mut offset = 0;
        for f in &facets {
            label_offsets.push(offset);
            offset += f.length as usize;
        }
        let negated = LatticePolytope::hull(sigma.vertices().iter().map(|&v| -v))?;
        let index = PolygonIndex::new(&sigma);
        let negated_index = PolygonIndex::new(&negated);
        let extremes = theta_extremes(&sigma);
        Ok(LatticePathContext {
            sigma,
            negated,
            index,
            negated_index,
            degree,
            facets,
            label_offsets,
            extremes,
        })
    }

    /// The standard triangle of degree `d`.
    pub fn delta(d: u64) -> Result<Self, LatticePathError> {
        Self::new(LatticePolytope::standard_triangle(d)?)
    }

    pub fn sigma(&self) -> &LatticePolytope {
        &self.sigma
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn index(&self) -> &PolygonIndex {
        &self.index
    }

    pub fn theta_min(&self) -> IntVec2 {
        self.extremes.0
    }

    pub fn theta_max(&self) -> IntVec2 {
        self.extremes.1
    }

    pub fn on_boundary(&self, a: IntVec2, b: IntVec2) -> bool {
        on_boundary(&self.sigma, a, b)
    }

    /// Facets in label order.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// The facet (in label order) containing the segment `[a, b]`.
    pub fn facet_of(&self, a: IntVec2, b: IntVec2) -> Option<usize> {
        self.facets.iter().position(|f| {
            let d = f.end - f.start;
            d.det(a - f.start) == 0 && d.det(b - f.start) == 0
        })
    }

    /// Degree labels of the ends dual to a facet.
    pub fn facet_labels(&self, facet: usize) -> RangeInclusive<usize> {
        let start = self.label_offsets[facet] + 1;
        start..=self.label_offsets[facet] + self.facets[facet].length as usize
    }

    /// The facet whose ends carry a degree label.
    pub fn facet_of_label(&self, label: usize) -> Option<usize> {
        (0..self.facets.len()).find(|&f| self.facet_labels(f).contains(&label))
    }

    pub(crate) fn side(&self, upper: bool) -> SideView<'_> {
        if upper {
            SideView {
                polytope: &self.sigma,
                index: &self.index,
            }
        } else {
            SideView {
                polytope: &self.negated,
                index: &self.negated_index,
            }
        }
    }
}
