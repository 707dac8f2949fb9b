//! Property tests for the reduction engine and prefix-drop functions.

mod common;

use common::{batch_reduce_binary, batch_reduce_ternary, Order};
use knockout::{
    prefix_drop_binary, prefix_drop_ternary, reduce_binary, reduce_ternary, seed_names,
    Alphabet, BitString, LabelState, Symbol,
};
use proptest::prelude::*;

fn symbol_strategy() -> impl Strategy<Value = Symbol> {
    prop_oneof![
        Just(Symbol::Zero),
        Just(Symbol::One),
        Just(Symbol::Bot),
    ]
}

fn bits_strategy(max_len: usize) -> impl Strategy<Value = BitString> {
    proptest::collection::vec(0u8..=1, 0..=max_len).prop_map(|v| BitString::from_bits(&v))
}

proptest! {
    #[test]
    fn ternary_online_equals_batch(s in proptest::collection::vec(symbol_strategy(), 0..32)) {
        let online = reduce_ternary(&s);
        let (batch_f, batch_e) = batch_reduce_ternary(&s, Order::LeftmostFirst);
        let online_f: Vec<Symbol> = online.f().symbols().collect();
        prop_assert_eq!(online_f, batch_f);
        prop_assert_eq!(online.e(), batch_e);
    }

    #[test]
    fn binary_online_equals_batch(s in bits_strategy(32), x in 2u8..=4) {
        let online = reduce_binary(&s, x);
        let (batch_f, batch_e) = batch_reduce_binary(&s, x, Order::LeftmostFirst);
        prop_assert_eq!(online.f(), &batch_f);
        prop_assert_eq!(online.e(), batch_e);
        let (right_f, right_e) = batch_reduce_binary(&s, x, Order::RightmostFirst);
        prop_assert_eq!(batch_f, right_f);
        prop_assert_eq!(batch_e, right_e);
    }

    #[test]
    fn stepping_one_symbol_matches_full_reduction(
        s in proptest::collection::vec(symbol_strategy(), 0..24),
        sym in symbol_strategy(),
    ) {
        let base = reduce_ternary(&s);
        let stepped = base.step(sym).unwrap();
        let mut extended = s.clone();
        extended.push(sym);
        prop_assert_eq!(stepped, reduce_ternary(&extended));
    }

    #[test]
    fn ternary_prefix_drop_is_truncation(s in bits_strategy(16), l in 0usize..20) {
        let dropped = prefix_drop_ternary(&s, l);
        prop_assert_eq!(dropped.len(), s.len().saturating_sub(l));
        prop_assert!(s.starts_with(&dropped));
    }

    #[test]
    fn binary_prefix_drop_yields_nested_prefixes(s in bits_strategy(16), l in 0usize..6, x in 2u8..=4) {
        let reduced = reduce_binary(&s, x).f().clone();
        let outer = prefix_drop_binary(&reduced, l, x);
        let inner = prefix_drop_binary(&reduced, l + 1, x);
        prop_assert!(reduced.starts_with(&outer));
        prop_assert!(outer.starts_with(&inner));
    }
}

/// All reduced binary strings (no consecutive ones) up to the given length.
fn reduced_strings(max_len: usize) -> Vec<BitString> {
    let mut out = vec![BitString::new()];
    for len in 1..=max_len {
        out.extend(seed_names(len, 2));
    }
    out
}

/// The prefix-drop recurrences behind the binary correctness lemma, checked
/// exhaustively: appending a one lowers the remaining drop count when the
/// string ends in one, keeps it when it ends in zero; appending a zero
/// always raises it.
#[test]
fn prefix_drop_observation_exhaustive() {
    let alphabet = Alphabet::binary(2).unwrap();
    for s in reduced_strings(12) {
        let state = LabelState::from_parts(s.clone(), 0, alphabet);
        let after_one = state.step(Symbol::One).unwrap().f().clone();
        let after_zero = state.step(Symbol::Zero).unwrap().f().clone();
        for l in 0usize..=4 {
            let base = prefix_drop_binary(&s, l, 2);
            // The one-appended identities hold for positive drop counts;
            // p_0 is the identity, so appending a bit cannot preserve it.
            if s.last() == Some(1) {
                if l >= 1 {
                    assert_eq!(
                        base,
                        prefix_drop_binary(&after_one, l - 1, 2),
                        "ends-in-one, one appended: s={s} l={l}"
                    );
                }
            } else if !s.is_empty() && l >= 1 {
                assert_eq!(
                    base,
                    prefix_drop_binary(&after_one, l, 2),
                    "ends-in-zero, one appended: s={s} l={l}"
                );
            }
            assert_eq!(
                base,
                prefix_drop_binary(&after_zero, l + 1, 2),
                "zero appended: s={s} l={l}"
            );
        }
    }
}

#[test]
fn seed_name_counts_follow_fibonacci() {
    for r in 1..=20usize {
        let count = knockout::valid_name_count(r, 2);
        assert_eq!(count, common::fibonacci(r as u32 + 2) as u128);
        if r <= 16 {
            assert_eq!(seed_names(r, 2).len() as u128, count);
        }
    }
}
