use crcount_core::{DegCrossRatio, EndRef};
use crcount_floor::{floor_count_with, validate_diagram, verify_reconstruction, PieceSolver};

fn points(js: [usize; 4]) -> DegCrossRatio {
    DegCrossRatio::new(js.map(EndRef::MarkedPoint)).unwrap()
}

fn check(d: u64, n: usize, lambdas: &[DegCrossRatio]) {
    let mut solver = PieceSolver::new(0);
    let result = floor_count_with(d, n, lambdas, &mut solver).unwrap();
    for (i, counted) in result.diagrams.iter().enumerate() {
        let diagram = &counted.class.diagram;
        validate_diagram(diagram, d).unwrap();
        let rec = verify_reconstruction(diagram, lambdas, counted.multiplicity, i as u64, &mut solver)
            .unwrap_or_else(|e| panic!("{e}\n{diagram}"));
        assert!(!rec.curves.is_empty());
    }
}

#[test]
fn conics_through_five_points() {
    check(2, 5, &[]);
}

#[test]
fn conics_with_a_cross_ratio() {
    check(2, 4, &[points([1, 2, 3, 4])]);
    check(2, 4, &[points([1, 3, 2, 4])]);
}

#[test]
fn cubics_through_eight_points() {
    check(3, 8, &[]);
}

#[test]
fn cubics_with_a_cross_ratio() {
    check(3, 7, &[points([1, 2, 3, 4])]);
    check(3, 7, &[points([1, 4, 5, 6])]);
}
