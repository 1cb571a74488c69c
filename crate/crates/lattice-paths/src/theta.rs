//! The linear order `θ(x, y) = x − εy` for an infinitesimal irrational
//! `ε > 0`, realized exactly as a lexicographic order.

use std::cmp::Ordering;

use crcount_core::{IntVec2, LatticePolytope};

/// Compares two lattice points by `θ`: smaller `x` first, and for equal
/// `x` the larger `y` first.
///
/// ```
/// use std::cmp::Ordering;
/// use crcount_core::IntVec2;
/// use crcount_lattice_paths::theta_compare;
/// assert_eq!(theta_compare(IntVec2::new(0, 1), IntVec2::new(0, 0)), Ordering::Less);
/// assert_eq!(theta_compare(IntVec2::new(0, 5), IntVec2::new(1, 0)), Ordering::Less);
/// ```
pub fn theta_compare(p: IntVec2, q: IntVec2) -> Ordering {
    p.x.cmp(&q.x).then(q.y.cmp(&p.y))
}

/// Whether a step by `v` strictly increases `θ`.
pub fn is_theta_increasing(v: IntVec2) -> bool {
    theta_compare(IntVec2::ZERO, v) == Ordering::Less
}

/// The vertices of a polygon where `θ` is minimal and maximal.
pub fn theta_extremes(polytope: &LatticePolytope) -> (IntVec2, IntVec2) {
    let vs = polytope.vertices();
    let min = *vs.iter().min_by(|a, b| theta_compare(**a, **b)).expect("nonempty polytope");
    let max = *vs.iter().max_by(|a, b| theta_compare(**a, **b)).expect("nonempty polytope");
    (min, max)
}

/// Turn direction at the junction of two consecutive steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Left,
    Straight,
    Right,
}

pub fn turn(first: IntVec2, second: IntVec2) -> Turn {
    match first.det(second).cmp(&0) {
        Ordering::Greater => Turn::Left,
        Ordering::Equal => Turn::Straight,
        Ordering::Less => Turn::Right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_points_are_not_ordered() {
        let p = IntVec2::new(2, 3);
        assert_eq!(theta_compare(p, p), Ordering::Equal);
        assert!(!is_theta_increasing(IntVec2::ZERO));
    }

    #[test]
    fn vertical_steps_go_down() {
        assert!(is_theta_increasing(IntVec2::new(0, -1)));
        assert!(!is_theta_increasing(IntVec2::new(0, 1)));
        assert!(is_theta_increasing(IntVec2::new(1, 7)));
    }

    #[test]
    fn extremes_of_the_standard_triangle() {
        let t = LatticePolytope::standard_triangle(3).unwrap();
        assert_eq!(theta_extremes(&t), (IntVec2::new(0, 3), IntVec2::new(3, 0)));
    }

    #[test]
    fn turns() {
        assert_eq!(turn(IntVec2::new(0, -1), IntVec2::new(1, 0)), Turn::Left);
        assert_eq!(turn(IntVec2::new(1, 0), IntVec2::new(0, -1)), Turn::Right);
        assert_eq!(turn(IntVec2::new(1, 1), IntVec2::new(2, 2)), Turn::Straight);
    }
}
