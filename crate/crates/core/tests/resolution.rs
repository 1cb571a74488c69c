use crcount_core::local_resolution_weight;
use proptest::prelude::*;
use proptest::sample::subsequence;

/// The three pairings of a four-set.
fn pairing(set: &[usize], choice: usize) -> [usize; 4] {
    let [a, b, c, d] = [set[0], set[1], set[2], set[3]];
    match choice {
        0 => [a, b, c, d],
        1 => [a, c, b, d],
        _ => [a, d, b, c],
    }
}

fn star() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (4usize..=6).prop_flat_map(|valence| {
        let sets = prop::collection::vec(subsequence((0..valence).collect::<Vec<_>>(), 4), valence - 3);
        (Just(valence), sets)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resolution_weight_ignores_the_pairing_choice(
        (valence, sets) in star(),
        first in prop::collection::vec(0usize..3, 3),
        second in prop::collection::vec(0usize..3, 3),
    ) {
        let a: Vec<[usize; 4]> = sets.iter().zip(&first).map(|(s, &c)| pairing(s, c)).collect();
        let b: Vec<[usize; 4]> = sets.iter().zip(&second).map(|(s, &c)| pairing(s, c)).collect();
        prop_assert_eq!(
            local_resolution_weight(valence, &a).unwrap(),
            local_resolution_weight(valence, &b).unwrap()
        );
    }

    #[test]
    fn resolution_weight_ignores_the_order_of_cross_ratios(
        (valence, sets) in star(),
        choice in prop::collection::vec(0usize..3, 3),
    ) {
        let forward: Vec<[usize; 4]> = sets.iter().zip(&choice).map(|(s, &c)| pairing(s, c)).collect();
        let mut backward = forward.clone();
        backward.reverse();
        prop_assert_eq!(
            local_resolution_weight(valence, &forward).unwrap(),
            local_resolution_weight(valence, &backward).unwrap()
        );
    }
}

#[test]
fn four_valent_vertex_has_weight_one() {
    assert_eq!(local_resolution_weight(4, &[[0, 1, 2, 3]]).unwrap(), 1);
}

#[test]
fn repeated_cross_ratio_on_a_five_valent_vertex() {
    let same = [[0, 1, 2, 3], [0, 1, 2, 3]];
    let other = [[0, 1, 2, 3], [0, 2, 1, 3]];
    assert_eq!(
        local_resolution_weight(5, &same).unwrap(),
        local_resolution_weight(5, &other).unwrap()
    );
}
