use crcount_core::{DegCrossRatio, EndRef};
use crcount_floor::floor_count;

fn points(js: [usize; 4]) -> DegCrossRatio {
    DegCrossRatio::new(js.map(EndRef::MarkedPoint)).unwrap()
}

#[test]
fn line_through_two_points() {
    assert_eq!(floor_count(1, 2, &[]).unwrap().count, 1);
}

#[test]
fn conics_through_five_points() {
    assert_eq!(floor_count(2, 5, &[]).unwrap().count, 8);
}

#[test]
fn cubics_through_eight_points() {
    assert_eq!(floor_count(3, 8, &[]).unwrap().count, 12 * 216);
}

#[test]
fn conics_with_a_four_point_cross_ratio() {
    assert_eq!(floor_count(2, 4, &[points([1, 2, 3, 4])]).unwrap().count, 8);
}

#[test]
fn cubics_with_a_four_point_cross_ratio() {
    let result = floor_count(3, 7, &[points([1, 2, 3, 4])]).unwrap();
    assert_eq!(result.count, 864);
    assert_eq!(result.diagrams.len(), 4);
    assert!(result.diagrams.iter().all(|c| c.multiplicity == 1 && c.class.labelings == 216));
}
