use std::collections::BTreeSet;

use crcount_core::{DegCrossRatio, EndRef, IntVec2};
use crcount_lattice_paths::{
    complete_subdivisions, enumerate_paths, lpa_count, theta_compare, LatticePathContext, PathMember,
};

#[test]
fn the_line_has_one_path_along_the_left_and_bottom_facets() {
    let ctx = LatticePathContext::delta(1).unwrap();
    let paths = enumerate_paths(&ctx, 2, 0);
    assert_eq!(paths.len(), 1);
    let corners: Vec<(IntVec2, IntVec2)> = paths[0].members.iter().map(|m| (m.start(), m.end())).collect();
    assert_eq!(
        corners,
        [(IntVec2::new(0, 1), IntVec2::new(0, 0)), (IntVec2::new(0, 0), IntVec2::new(1, 0))]
    );
    assert_eq!(complete_subdivisions(&ctx, &paths[0], 0).len(), 1);
}

#[test]
fn paths_are_theta_increasing_chains_from_p_to_q() {
    for (d, n, l) in [(2, 5, 0), (2, 4, 1), (3, 7, 1)] {
        let ctx = LatticePathContext::delta(d).unwrap();
        for path in enumerate_paths(&ctx, n, l) {
            assert_eq!(path.members[0].start(), ctx.theta_min());
            assert_eq!(path.members.last().unwrap().end(), ctx.theta_max());
            for pair in path.members.windows(2) {
                assert_eq!(pair[0].end(), pair[1].start());
            }
            for m in &path.members {
                assert!(theta_compare(m.start(), m.end()).is_lt());
            }
            assert_eq!(path.point_count(), n);
            assert!(path.marks() <= l);
        }
    }
}

#[test]
fn members_on_the_boundary_carry_unit_labels() {
    let ctx = LatticePathContext::delta(3).unwrap();
    for path in enumerate_paths(&ctx, 7, 1) {
        for m in &path.members {
            for e in m.edges() {
                if ctx.on_boundary(e.start, e.end) {
                    assert!(e.labeling().iter().all(|&v| v == 1));
                }
            }
            if let PathMember::Segment(s) = m {
                let length = s.length();
                assert_eq!(s.lower_tilde.iter().chain(&s.segments).sum::<u64>(), length);
                assert_eq!(s.upper_tilde.iter().chain(&s.segments).sum::<u64>(), length);
            }
        }
    }
}

#[test]
fn four_seven_step_paths_carry_the_cubic_count() {
    let ctx = LatticePathContext::delta(3).unwrap();
    let lambda = DegCrossRatio::new([
        EndRef::MarkedPoint(1),
        EndRef::MarkedPoint(2),
        EndRef::EndLabel(7),
        EndRef::EndLabel(8),
    ])
    .unwrap();
    let count = lpa_count(&ctx, 7, &[lambda]).unwrap();
    let paths: BTreeSet<String> = count
        .curves
        .iter()
        .map(|c| format!("{:?}", c.subdivision.path))
        .collect();
    assert_eq!(paths.len(), 4);
    assert!(count.curves.iter().all(|c| c.subdivision.path.members.len() == 7));
}
