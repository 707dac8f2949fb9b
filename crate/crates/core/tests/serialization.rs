//! Round-trip invariants for the file formats, driven by randomized
//! construction parameters rather than hand-enumerated cases.

use knockout::{
    build_binary, build_standard, build_ternary, Seeding, TournamentTree, WinnerMatrix,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_json_round_trips(mode in 0..3usize, pow in 1..=4u32, n in 2..=20u64, k in 0..=2u32, x in 2..=3u8) {
        let tree = match mode {
            0 => build_standard(1 << pow).unwrap(),
            1 => build_ternary(1 << pow, k).unwrap(),
            _ => build_binary(n, k, x).unwrap(),
        };
        let back = TournamentTree::from_json(&tree.to_json()).unwrap();
        prop_assert_eq!(tree, back);
    }

    #[test]
    fn winner_and_seeding_files_round_trip(n in 2..=8u32, strongest in 1..=8u32, bias in any::<u64>()) {
        let strongest = (strongest <= n).then_some(strongest);
        let matrix = WinnerMatrix::from_rule(n, strongest, |i, j| {
            (bias >> ((i * 7 + j) % 61)) & 1 == 0
        });
        prop_assert_eq!(WinnerMatrix::from_json(&matrix.to_json()).unwrap(), matrix);

        let tree = build_binary(n as u64, 1, 2).unwrap();
        let seeding = Seeding::round_robin(&tree.seed_names, n);
        prop_assert_eq!(Seeding::from_json(&seeding.to_json()).unwrap(), seeding);
    }
}
