use std::sync::OnceLock;

use crcount_core::{
    builtin_degree, ev_ft_det, theta_matrix_det, total_multiplicity, BuiltinDegree, DegCrossRatio, EndRef,
    ExtraConditions,
};
use crcount_oracle::{degenerate_curve, OracleTypes, ProblemShape, DEFAULT_RETRY_BUDGET};
use num_bigint::BigInt;
use proptest::prelude::*;

fn delta(d: u64) -> crcount_core::Degree {
    builtin_degree(&BuiltinDegree::DeltaD(d)).unwrap()
}

fn lambda(refs: [&str; 4]) -> DegCrossRatio {
    DegCrossRatio::new(refs.map(|r| r.parse::<EndRef>().unwrap())).unwrap()
}

/// Checks that the ev-ft determinant, the vertex-position determinant and
/// the product of local ev-multiplicities of the degenerated curve agree.
fn check_determinants(types: &OracleTypes, seed: u64) -> u64 {
    let shape = types.shape();
    let run = types.count_generic(seed, DEFAULT_RETRY_BUDGET).unwrap();
    let lambdas: Vec<DegCrossRatio> = shape.pairings.iter().map(|p| DegCrossRatio::new(p.refs()).unwrap()).collect();
    for curve in &run.curves {
        let extra = ExtraConditions {
            cross_ratios: &shape.pairings,
            height_ends: &shape.height_ends,
        };
        let det_a = ev_ft_det(&curve.map, extra).unwrap();
        let det_b = theta_matrix_det(&curve.map, extra).unwrap();
        assert_eq!(det_a, BigInt::from(curve.multiplicity));
        assert_eq!(det_a, det_b);
        let degenerated = degenerate_curve(&curve.map, &shape.pairings).unwrap();
        let breakdown = total_multiplicity(&degenerated, &lambdas).unwrap();
        assert_eq!(breakdown.resolution_part(), 1);
        assert_eq!(BigInt::from(breakdown.ev_part()), det_a);
        assert_eq!(breakdown.total, curve.multiplicity);
    }
    run.count
}

#[test]
fn line_through_two_points() {
    let shape = ProblemShape::from_degenerate(delta(1), 2, &[]);
    let types = OracleTypes::enumerate(&shape).unwrap();
    for seed in 0..3 {
        assert_eq!(check_determinants(&types, seed), 1);
    }
}

#[test]
fn conics_through_five_points() {
    let shape = ProblemShape::from_degenerate(delta(2), 5, &[]);
    let types = OracleTypes::enumerate(&shape).unwrap();
    for seed in 0..5 {
        assert_eq!(check_determinants(&types, seed), 8);
    }
}

#[test]
fn conics_with_one_cross_ratio() {
    for refs in [["x1", "x2", "x3", "x4"], ["x1", "x2", "e1", "e4"], ["x1", "e1", "e3", "e5"]] {
        let shape = ProblemShape::from_degenerate(delta(2), 4, &[lambda(refs)]);
        let types = OracleTypes::enumerate(&shape).unwrap();
        let counts: Vec<u64> = (0..5).map(|seed| check_determinants(&types, seed)).collect();
        assert!(counts.iter().all(|&c| c == counts[0]), "{refs:?}: {counts:?}");
    }
}

fn four_point_conics() -> &'static OracleTypes {
    static TYPES: OnceLock<OracleTypes> = OnceLock::new();
    TYPES.get_or_init(|| {
        let shape = ProblemShape::from_degenerate(delta(2), 4, &[lambda(["x1", "x2", "x3", "x4"])]);
        OracleTypes::enumerate(&shape).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn count_is_independent_of_the_seed(seed in any::<u64>()) {
        prop_assert_eq!(four_point_conics().count_generic(seed, DEFAULT_RETRY_BUDGET).unwrap().count, 8);
    }
}
