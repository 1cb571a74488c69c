use std::collections::BTreeSet;

use crcount_core::{DegCrossRatio, EndRef};
use crcount_floor::{
    enumerate_diagrams, piece_multiplicity, validate_diagram, CrossRatioFloorDiagram, DiagramEdge, DiagramPiece,
    DiagramVertex, DiagramViolation, HalfEdge,
};

fn points(js: [usize; 4]) -> DegCrossRatio {
    DegCrossRatio::new(js.map(EndRef::MarkedPoint)).unwrap()
}

fn vertex(size: u64, lambda_count: usize, labels: &[usize]) -> DiagramVertex {
    DiagramVertex {
        size,
        lambda_count,
        labels: labels.iter().copied().collect::<BTreeSet<_>>(),
    }
}

fn edge(source: usize, target: usize, thick_at_source: bool) -> DiagramEdge {
    let (source_mark, target_mark) = if thick_at_source {
        (HalfEdge::Thick, HalfEdge::Thin)
    } else {
        (HalfEdge::Thin, HalfEdge::Thick)
    };
    DiagramEdge {
        source,
        target,
        weight: 1,
        source_mark,
        target_mark,
    }
}

/// The degree-3 diagram on seven vertices with sizes 0,0,0,1,1,0,1, one
/// cross-ratio at v5 and end labels {1},{2},{3},{4,9},{5,8},{},{6,7}.
fn example_diagram() -> CrossRatioFloorDiagram {
    CrossRatioFloorDiagram {
        d: 3,
        vertices: vec![
            vertex(0, 0, &[1]),
            vertex(0, 0, &[2]),
            vertex(0, 0, &[3]),
            vertex(1, 0, &[4, 9]),
            vertex(1, 1, &[5, 8]),
            vertex(0, 0, &[]),
            vertex(1, 0, &[6, 7]),
        ],
        edges: vec![
            edge(0, 4, true),
            edge(1, 3, true),
            edge(2, 3, true),
            edge(3, 4, false),
            edge(4, 5, false),
            edge(5, 6, true),
        ],
    }
}

#[test]
fn example_diagram_is_valid_and_satisfies_its_cross_ratio() {
    let diagram = example_diagram();
    validate_diagram(&diagram, 3).unwrap();
    let lambda = points([1, 4, 5, 6]);
    assert_eq!(diagram.satisfies(&lambda), Some(4));
    assert!(diagram.satisfies_all(&[lambda]));
}

#[test]
fn example_diagram_is_enumerated() {
    let lambda = points([1, 4, 5, 6]);
    let target = example_diagram();
    let shape = |d: &CrossRatioFloorDiagram| {
        let sizes: Vec<u64> = d.vertices.iter().map(|v| v.size).collect();
        let left: Vec<u64> = (0..d.vertex_count()).map(|v| d.left_ends(v)).collect();
        (sizes, left, d.edges.clone())
    };
    let classes = enumerate_diagrams(3, 7, &[lambda]).unwrap();
    assert!(classes.iter().any(|c| shape(&c.diagram) == shape(&target)));
}

#[test]
fn thick_count_violation_is_reported() {
    let mut diagram = example_diagram();
    diagram.vertices[4].lambda_count = 0;
    assert!(matches!(
        validate_diagram(&diagram, 3),
        Err(DiagramViolation::ThickCount { vertex: 4, .. })
    ));
}

#[test]
fn unbalanced_vertex_is_reported() {
    let mut diagram = example_diagram();
    diagram.edges[5].weight = 2;
    assert!(matches!(
        validate_diagram(&diagram, 3),
        Err(DiagramViolation::Unbalanced { vertex: 5, .. })
    ));
}

#[test]
fn marks_must_be_complementary() {
    let mut diagram = example_diagram();
    diagram.edges[0].target_mark = HalfEdge::Thick;
    assert_eq!(validate_diagram(&diagram, 3), Err(DiagramViolation::Marks { edge: 0 }));
}

#[test]
fn paths_sharing_an_edge_do_not_satisfy() {
    let diagram = example_diagram();
    // Pairing x1 x6 | x2 x7 gives the paths v1-v5-v6 and v2-v4-v5-v6-v7,
    // which share the edge v5-v6.
    assert_eq!(diagram.satisfies(&points([1, 2, 6, 7])), None);
}

#[test]
fn disjoint_paths_do_not_satisfy() {
    let diagram = example_diagram();
    assert_eq!(diagram.satisfies(&points([2, 3, 6, 7])), None);
}

#[test]
fn size_one_floor_without_cross_ratios_has_multiplicity_one() {
    let diagram = example_diagram();
    let lambda = points([1, 4, 5, 6]);
    for v in [3, 6] {
        let piece = DiagramPiece::from_diagram(&diagram, v, &[lambda]).unwrap();
        assert_eq!(piece.size, 1);
        assert!(piece.lambdas.is_empty());
        assert_eq!(piece_multiplicity(&piece).unwrap(), 1);
    }
}

#[test]
fn point_on_an_elevator_has_multiplicity_one() {
    let diagram = example_diagram();
    let piece = DiagramPiece::from_diagram(&diagram, 5, &[points([1, 4, 5, 6])]).unwrap();
    assert_eq!(piece.alpha(), piece.beta());
    assert_eq!(piece_multiplicity(&piece).unwrap(), 1);
}

#[test]
fn size_one_floor_with_a_cross_ratio() {
    let diagram = example_diagram();
    let piece = DiagramPiece::from_diagram(&diagram, 4, &[points([1, 4, 5, 6])]).unwrap();
    assert_eq!(piece.lambdas.len(), 1);
    assert_eq!(piece_multiplicity(&piece).unwrap(), 1);
}
