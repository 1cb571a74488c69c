//! Integer plane vectors and convex lattice polygons.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// A vector of the integer lattice in the plane.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct IntVec2 {
    pub x: i64,
    pub y: i64,
}

impl IntVec2 {
    pub const ZERO: IntVec2 = IntVec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        IntVec2 { x, y }
    }

    /// The 2x2 determinant `self.x * other.y - self.y * other.x`.
    pub fn det(self, other: IntVec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: IntVec2) -> i64 {
        self.x * other.x + self.y * other.y
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Rotation by a quarter turn clockwise; maps the direction of a
    /// counterclockwise boundary edge to an outward normal.
    pub fn rotate_cw(self) -> IntVec2 {
        IntVec2::new(self.y, -self.x)
    }

    /// Counterclockwise angular comparison of two nonzero vectors, with
    /// angles measured in `[0, 2π)` from `start`.
    pub fn angle_cmp_from(start: IntVec2, a: IntVec2, b: IntVec2) -> Ordering {
        let half = |v: IntVec2| {
            let d = start.det(v);
            if d > 0 || (d == 0 && start.dot(v) > 0) {
                0
            } else {
                1
            }
        };
        half(a).cmp(&half(b)).then_with(|| 0.cmp(&a.det(b)))
    }
}

impl fmt::Display for IntVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for IntVec2 {
    type Output = IntVec2;
    fn add(self, o: IntVec2) -> IntVec2 {
        IntVec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for IntVec2 {
    fn add_assign(&mut self, o: IntVec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for IntVec2 {
    type Output = IntVec2;
    fn sub(self, o: IntVec2) -> IntVec2 {
        IntVec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for IntVec2 {
    type Output = IntVec2;
    fn neg(self) -> IntVec2 {
        IntVec2::new(-self.x, -self.y)
    }
}

impl Mul<i64> for IntVec2 {
    type Output = IntVec2;
    fn mul(self, k: i64) -> IntVec2 {
        IntVec2::new(self.x * k, self.y * k)
    }
}

impl Sum for IntVec2 {
    fn sum<I: Iterator<Item = IntVec2>>(iter: I) -> IntVec2 {
        iter.fold(IntVec2::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a IntVec2> for IntVec2 {
    fn sum<I: Iterator<Item = &'a IntVec2>>(iter: I) -> IntVec2 {
        iter.copied().sum()
    }
}

/// Splits a nonzero vector into its primitive direction and its weight.
///
/// ```
/// use crcount_core::{primitive_direction, IntVec2};
/// let (dir, w) = primitive_direction(IntVec2::new(2, 2)).unwrap();
/// assert_eq!((dir, w), (IntVec2::new(1, 1), 2));
/// ```
pub fn primitive_direction(v: IntVec2) -> Result<(IntVec2, u64), CoreError> {
    if v.is_zero() {
        return Err(CoreError::ZeroDirection);
    }
    let g = v.x.gcd(&v.y);
    Ok((IntVec2::new(v.x / g, v.y / g), g as u64))
}

/// Number of lattice points on the segment `[a, b]` minus one.
pub fn lattice_length(a: IntVec2, b: IntVec2) -> u64 {
    let d = b - a;
    d.x.gcd(&d.y) as u64
}

/// One boundary edge of a lattice polygon, oriented counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Facet {
    pub start: IntVec2,
    pub end: IntVec2,
    /// Primitive outward normal.
    pub normal: IntVec2,
    pub length: u64,
}

/// A convex lattice polygon stored by its counterclockwise vertex list.
///
/// Lower-dimensional polytopes are allowed: a single vertex is a point and
/// two vertices form a segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolytope {
    vertices: Vec<IntVec2>,
}

impl LatticePolytope {
    /// Convex hull of a nonempty point set. Collinear boundary points are
    /// dropped and the vertex list starts at the lexicographically smallest
    /// vertex.
    pub fn hull<I: IntoIterator<Item = IntVec2>>(points: I) -> Result<Self, CoreError> {
        let mut pts: Vec<IntVec2> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.is_empty() {
            return Err(CoreError::EmptyPolytope);
        }
        if pts.len() <= 2 {
            return Ok(LatticePolytope { vertices: pts });
        }
        let cross = |o: IntVec2, a: IntVec2, b: IntVec2| (a - o).det(b - o);
        let mut lower: Vec<IntVec2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<IntVec2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Ok(LatticePolytope { vertices: lower })
    }

    /// The triangle with vertices (0,0), (d,0), (0,d).
    pub fn standard_triangle(d: u64) -> Result<Self, CoreError> {
        if d == 0 {
            return Err(CoreError::DegeneratePolytope);
        }
        let d = d as i64;
        Self::hull([IntVec2::new(0, 0), IntVec2::new(d, 0), IntVec2::new(0, d)])
    }

    /// The trapezoid with vertices (0,0), (s,0), (s,b), (0,b+s).
    pub fn hirzebruch(s: u64, b: u64) -> Result<Self, CoreError> {
        if s == 0 {
            return Err(CoreError::DegeneratePolytope);
        }
        let (s, b) = (s as i64, b as i64);
        Self::hull([
            IntVec2::new(0, 0),
            IntVec2::new(s, 0),
            IntVec2::new(s, b),
            IntVec2::new(0, b + s),
        ])
    }

    pub fn vertices(&self) -> &[IntVec2] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len().min(3) - 1
    }

    /// Twice the Euclidean area.
    pub fn double_area(&self) -> i64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].det(self.vertices[(i + 1) % n]))
            .sum()
    }

    /// Counterclockwise boundary edges of a two-dimensional polygon.
    pub fn facets(&self) -> Vec<Facet> {
        if self.dimension() < 2 {
            return Vec::new();
        }
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (start, end) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let (dir, length) = primitive_direction(end - start).expect("distinct vertices");
                Facet {
                    start,
                    end,
                    normal: dir.rotate_cw(),
                    length,
                }
            })
            .collect()
    }

    /// Facets in label order: normal (-1,0) first, then (1,0), then the
    /// remaining facets counterclockwise starting from direction (0,-1).
    pub fn facets_in_label_order(&self) -> Vec<Facet> {
        let left = IntVec2::new(-1, 0);
        let right = IntVec2::new(1, 0);
        let down = IntVec2::new(0, -1);
        let mut facets = self.facets();
        let rank = |f: &Facet| {
            if f.normal == left {
                0
            } else if f.normal == right {
                1
            } else {
                2
            }
        };
        facets.sort_by(|a, b| {
            rank(a)
                .cmp(&rank(b))
                .then_with(|| IntVec2::angle_cmp_from(down, a.normal, b.normal))
        });
        facets
    }

    /// Whether `p` lies in the closed polytope.
    pub fn contains(&self, p: IntVec2) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                (b - a).det(p - a) == 0 && (p - a).dot(p - b) <= 0
            }
            n => (0..n).all(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                (b - a).det(p - a) >= 0
            }),
        }
    }

    /// All lattice points of the closed polytope.
    pub fn lattice_points(&self) -> Vec<IntVec2> {
        let xs = self.vertices.iter().map(|v| v.x);
        let ys = self.vertices.iter().map(|v| v.y);
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = IntVec2::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_direction_examples() {
        assert_eq!(
            primitive_direction(IntVec2::new(0, -3)).unwrap(),
            (IntVec2::new(0, -1), 3)
        );
        assert_eq!(
            primitive_direction(IntVec2::new(1, 1)).unwrap(),
            (IntVec2::new(1, 1), 1)
        );
        assert!(matches!(
            primitive_direction(IntVec2::ZERO),
            Err(CoreError::ZeroDirection)
        ));
    }

    #[test]
    fn lattice_length_examples() {
        let o = IntVec2::ZERO;
        assert_eq!(lattice_length(o, IntVec2::new(3, 0)), 3);
        assert_eq!(lattice_length(o, IntVec2::new(2, 2)), 2);
        assert_eq!(lattice_length(o, IntVec2::new(1, 2)), 1);
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let p = LatticePolytope::hull([
            IntVec2::new(0, 0),
            IntVec2::new(1, 0),
            IntVec2::new(2, 0),
            IntVec2::new(0, 2),
            IntVec2::new(0, 1),
            IntVec2::new(1, 1),
        ])
        .unwrap();
        assert_eq!(
            p.vertices(),
            &[IntVec2::new(0, 0), IntVec2::new(2, 0), IntVec2::new(0, 2)]
        );
        assert_eq!(p.double_area(), 4);
        assert_eq!(p.lattice_points().len(), 6);
    }

    #[test]
    fn triangle_facets_in_label_order() {
        let t = LatticePolytope::standard_triangle(3).unwrap();
        let normals: Vec<_> = t.facets_in_label_order().iter().map(|f| f.normal).collect();
        assert_eq!(
            normals,
            vec![IntVec2::new(-1, 0), IntVec2::new(0, -1), IntVec2::new(1, 1)]
        );
    }

    #[test]
    fn trapezoid_facets_in_label_order() {
        let t = LatticePolytope::hirzebruch(2, 1).unwrap();
        let facets = t.facets_in_label_order();
        let summary: Vec<_> = facets.iter().map(|f| (f.normal, f.length)).collect();
        assert_eq!(
            summary,
            vec![
                (IntVec2::new(-1, 0), 3),
                (IntVec2::new(1, 0), 1),
                (IntVec2::new(0, -1), 2),
                (IntVec2::new(1, 1), 2),
            ]
        );
    }
}
