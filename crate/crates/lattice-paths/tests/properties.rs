use std::sync::Mutex;

use crcount_core::{builtin_degree, BuiltinDegree, DegCrossRatio, EndRef};
use crcount_lattice_paths::{adjust_colors, lpa_count, Color, LabelInstance, LatticePathContext, Summand};
use crcount_oracle::{ProblemShape, TypeCache, DEFAULT_RETRY_BUDGET};
use proptest::prelude::*;
use proptest::sample::subsequence;

/// References of the conic problem with `n` points.
fn conic_refs(n: usize) -> Vec<EndRef> {
    (1..=n)
        .map(EndRef::MarkedPoint)
        .chain((1..=6).map(EndRef::EndLabel))
        .collect()
}

fn lambda(refs: &[EndRef]) -> DegCrossRatio {
    DegCrossRatio::new([refs[0], refs[1], refs[2], refs[3]]).unwrap()
}

static ORACLE: Mutex<Option<TypeCache>> = Mutex::new(None);

fn oracle_count(n: usize, lambdas: &[DegCrossRatio], seed: u64) -> u64 {
    let shape = ProblemShape::from_degenerate(builtin_degree(&BuiltinDegree::DeltaD(2)).unwrap(), n, lambdas);
    let mut cache = ORACLE.lock().unwrap();
    let types = cache.get_or_insert_with(TypeCache::default).get(&shape).unwrap();
    types.count_generic(seed, DEFAULT_RETRY_BUDGET).unwrap().count
}

fn conic_count(n: usize, lambdas: &[DegCrossRatio]) -> u64 {
    let ctx = LatticePathContext::delta(2).unwrap();
    lpa_count(&ctx, n, lambdas).unwrap().labeled
}

/// The fixpoint of the color rules applied one pair at a time in the
/// given order, repeated until nothing changes.
fn naive_adjust(instances: &[LabelInstance], gluings: &[(usize, usize)], colors: &mut [Color], order: &[usize]) {
    loop {
        let mut changed = false;
        for &g in order {
            let (a, b) = gluings[g];
            if colors[a] != colors[b] {
                colors[a] = Color::Fixed;
                colors[b] = Color::Fixed;
                changed = true;
            }
        }
        for i in 0..instances.len() {
            let same: Vec<usize> = (0..instances.len())
                .filter(|&j| instances[j].cell == instances[i].cell && instances[j].summand == instances[i].summand)
                .collect();
            let fixed = same.iter().filter(|&&j| colors[j] == Color::Fixed).count();
            let spread = match instances[i].summand {
                Summand::Segment(_) => fixed >= 1,
                Summand::Tilde => fixed >= 2,
            };
            if spread && fixed < same.len() {
                for j in same {
                    colors[j] = Color::Fixed;
                }
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

type Complex = (Vec<LabelInstance>, Vec<(usize, usize)>, Vec<bool>, Vec<usize>);

fn complex() -> impl Strategy<Value = Complex> {
    prop::collection::vec((0usize..4, 0usize..3), 2..14).prop_flat_map(|shape| {
        let instances: Vec<LabelInstance> = shape
            .iter()
            .enumerate()
            .map(|(i, &(cell, kind))| LabelInstance {
                cell,
                edge: i,
                value: 1,
                summand: if kind == 0 { Summand::Tilde } else { Summand::Segment(kind) },
            })
            .collect();
        let count = instances.len();
        let gluings = prop::collection::vec((0..count, 0..count), 0..count)
            .prop_map(|pairs| pairs.into_iter().filter(|(a, b)| a != b).collect::<Vec<_>>());
        (Just(instances), gluings, prop::collection::vec(any::<bool>(), count)).prop_flat_map(
            |(instances, gluings, fixed)| {
                let order = Just((0..gluings.len()).collect::<Vec<_>>()).prop_shuffle();
                (Just(instances), Just(gluings), Just(fixed), order)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn count_ignores_the_order_of_cross_ratios(
        first in subsequence(conic_refs(3), 4).prop_shuffle(),
        second in subsequence(conic_refs(3), 4).prop_shuffle(),
    ) {
        let forward = conic_count(3, &[lambda(&first), lambda(&second)]);
        let backward = conic_count(3, &[lambda(&second), lambda(&first)]);
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn color_adjustment_is_confluent((instances, gluings, fixed, order) in complex()) {
        let initial: Vec<Color> = fixed.iter().map(|&f| if f { Color::Fixed } else { Color::Free }).collect();
        let mut fast = initial.clone();
        adjust_colors(&instances, &gluings, &mut fast);
        let mut naive = initial.clone();
        naive_adjust(&instances, &gluings, &mut naive, &order);
        prop_assert_eq!(&fast, &naive);
        let mut reversed_order = order.clone();
        reversed_order.reverse();
        let mut again = initial;
        naive_adjust(&instances, &gluings, &mut again, &reversed_order);
        prop_assert_eq!(fast, again);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn count_agrees_with_the_oracle(
        l in 0usize..=1,
        refs in subsequence(conic_refs(4), 4),
        seed in any::<u64>(),
    ) {
        let n = 5 - l;
        let lambdas: Vec<DegCrossRatio> = (l == 1).then(|| lambda(&refs)).into_iter().collect();
        prop_assert_eq!(conic_count(n, &lambdas), oracle_count(n, &lambdas, seed));
    }
}
