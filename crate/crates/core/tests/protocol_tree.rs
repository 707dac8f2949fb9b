//! The protocol-to-tournament correspondence: transcripts of protocol runs,
//! read as edge strings, land on tree vertices carrying the transmitted
//! message, and decoding always agrees with the label reduction.

mod common;

use common::{all_bitstrings, random_bits, random_sparse_bits};
use knockout::{
    build_binary_tree, build_ternary_tree, decode, path_to_transcript, reduce_binary,
    reduce_ternary, run_protocol, run_protocol_with, EveStrategy, Symbol, TournamentTree,
    Variant,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn flip(sym: Symbol) -> Option<Symbol> {
    match sym {
        Symbol::Zero => Some(Symbol::One),
        Symbol::One => Some(Symbol::Zero),
        Symbol::Bot => None,
    }
}

/// Every run's transcript must walk from the root of the matching tree to a
/// vertex whose reduced label equals the message (a leaf only when the whole
/// error budget was consumed). Manipulated games correspond to flipped bit
/// transmissions, so Eve flips here; she never substitutes the error symbol.
#[test]
fn transcripts_are_tree_paths() {
    for k in 0..=1u32 {
        for r in 1..=4usize {
            let ternary: TournamentTree = build_ternary_tree(r, k).unwrap();
            let binary = build_binary_tree(r, k, 2).unwrap();
            // Corrupt no round, or exactly one bit-transmission round.
            let max_rounds = r + 3 * k as usize;
            for target in 0..=max_rounds {
                let corruptions_left = if target == max_rounds { 0 } else { k };
                for message in all_bitstrings(r) {
                    let run = run_protocol_with(
                        Variant::ErrorSymbol,
                        &message,
                        corruptions_left,
                        |round, sent, _| (round == target).then(|| flip(sent)).flatten(),
                    )
                    .unwrap();
                    let vertex = ternary
                        .walk(&run.transcript())
                        .unwrap_or_else(|| panic!("transcript not a path for {message} k={k}"));
                    let node = ternary.node(vertex).unwrap();
                    assert_eq!(node.label.f(), &message, "wrong landing for {message}");
                    assert_eq!(node.label.e(), run.corruptions, "error count mismatch");

                    if message.max_one_run() >= 2 {
                        continue;
                    }
                    let run = run_protocol_with(
                        Variant::Binary,
                        &message,
                        corruptions_left,
                        |round, sent, _| (round == target).then(|| flip(sent)).flatten(),
                    )
                    .unwrap();
                    let vertex = binary
                        .walk(&run.transcript())
                        .unwrap_or_else(|| panic!("transcript not a path for {message} k={k}"));
                    let node = binary.node(vertex).unwrap();
                    assert_eq!(node.label.f(), &message, "wrong landing for {message}");
                    assert_eq!(node.label.e(), run.corruptions, "error count mismatch");
                }
            }
        }
    }
}

/// Leaf transcripts of constructed trees decode to the leaf's name with the
/// full error budget spent.
#[test]
fn leaf_transcripts_reduce_to_names() {
    let ternary = build_ternary_tree(2, 1).unwrap();
    for leaf in ternary.leaves() {
        let transcript = path_to_transcript(&ternary, leaf.id).unwrap();
        let reduced = reduce_ternary(&transcript);
        assert_eq!(Some(reduced.f()), leaf.seed_name.as_ref());
        assert_eq!(reduced.e(), ternary.k);
    }
    let binary = build_binary_tree(3, 1, 2).unwrap();
    for leaf in binary.leaves() {
        let transcript = path_to_transcript(&binary, leaf.id).unwrap();
        let bits: knockout::BitString = transcript
            .iter()
            .map(|s| s.as_char())
            .collect::<String>()
            .parse()
            .unwrap();
        let reduced = reduce_binary(&bits, 2);
        assert_eq!(Some(reduced.f()), leaf.seed_name.as_ref());
        assert_eq!(reduced.e(), binary.k);
    }
}

/// Decoding a generated transcript always equals the label-engine reduction.
#[test]
fn decode_label_duality_fuzz() {
    let mut rng = StdRng::seed_from_u64(0xd0a1);
    for case in 0..10_000u64 {
        let message = random_bits(&mut rng, 10);
        let budget = rng.gen_range(0..=3u32);
        let run = run_protocol(
            Variant::ErrorSymbol,
            &message,
            &EveStrategy::Random { seed: case },
            budget,
        )
        .unwrap();
        let transcript = run.transcript();
        assert_eq!(
            decode(Variant::ErrorSymbol, &transcript).unwrap(),
            *reduce_ternary(&transcript).f()
        );
    }
    for case in 0..10_000u64 {
        let message = random_sparse_bits(&mut rng, 10, 2);
        let budget = rng.gen_range(0..=3u32);
        let run = run_protocol(
            Variant::Binary,
            &message,
            &EveStrategy::Random { seed: case },
            budget,
        )
        .unwrap();
        let transcript = run.transcript();
        let bits: knockout::BitString = transcript
            .iter()
            .map(|s| s.as_char())
            .collect::<String>()
            .parse()
            .unwrap();
        assert_eq!(
            decode(Variant::Binary, &transcript).unwrap(),
            *reduce_binary(&bits, 2).f()
        );
    }
}
