use crcount_core::{DegCrossRatio, EndRef};
use crcount_lattice_paths::{lpa_count, LatticePathContext};

fn count(d: u64, n: usize, lambdas: &[DegCrossRatio]) -> (u64, Option<u64>) {
    let ctx = LatticePathContext::delta(d).unwrap();
    let c = lpa_count(&ctx, n, lambdas).unwrap();
    eprintln!("paths {} subdivisions {} curves {} duplicates {}", c.paths, c.subdivisions, c.curves.len(), c.duplicates);
    (c.labeled, c.unlabeled())
}

fn lambda(refs: [EndRef; 4]) -> DegCrossRatio {
    DegCrossRatio::new(refs).unwrap()
}

#[test]
fn line_through_two_points() {
    assert_eq!(count(1, 2, &[]), (1, Some(1)));
}

#[test]
fn conics_through_five_points() {
    assert_eq!(count(2, 5, &[]), (8, Some(1)));
}

use EndRef::{EndLabel as E, MarkedPoint as X};

#[test]
fn conics_with_a_point_cross_ratio() {
    assert_eq!(count(2, 4, &[lambda([X(1), X(2), X(3), X(4)])]).0, 8);
}

#[test]
fn conics_with_mixed_cross_ratio() {
    assert_eq!(count(2, 4, &[lambda([X(1), X(2), E(1), E(4)])]).0, 4);
}

#[test]
fn conics_with_one_point_cross_ratio() {
    assert_eq!(count(2, 4, &[lambda([X(1), E(1), E(3), E(5)])]).0, 5);
}

#[test]
fn cubics_through_eight_points() {
    assert_eq!(count(3, 8, &[]), (2592, Some(12)));
}

#[test]
fn cubics_with_two_point_two_end_cross_ratio() {
    assert_eq!(count(3, 7, &[lambda([X(1), X(2), E(7), E(8)])]), (1440, Some(40)));
}
