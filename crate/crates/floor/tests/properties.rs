use crcount_core::{DegCrossRatio, EndRef};
use crcount_floor::floor_count;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn lambda(js: &[usize]) -> DegCrossRatio {
    DegCrossRatio::new([js[0], js[1], js[2], js[3]].map(EndRef::MarkedPoint)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn count_ignores_the_order_of_cross_ratios(
        first in subsequence(vec![1usize, 2, 3, 4, 5, 6], 4),
        second in subsequence(vec![1usize, 2, 3, 4, 5, 6], 4),
        reverse_refs in any::<bool>(),
    ) {
        let lambdas = [lambda(&first), lambda(&second)];
        let forward = floor_count(3, 6, &lambdas).unwrap().count;
        let backward = floor_count(3, 6, &[lambdas[1], lambdas[0]]).unwrap().count;
        prop_assert_eq!(forward, backward);
        if reverse_refs {
            let mut reversed = first.clone();
            reversed.reverse();
            let again = floor_count(3, 6, &[lambda(&reversed), lambdas[1]]).unwrap().count;
            prop_assert_eq!(forward, again);
        }
    }
}
