//! Feedback-channel transmission protocols under adversarial noise.
//!
//! Alice streams a message to Bob over a channel that Eve may corrupt; a
//! perfect feedback channel shows Alice exactly what Bob received. The
//! error-symbol variant signals a detected corruption with a dedicated
//! symbol that makes Bob delete his last bit. The binary variant replaces
//! that symbol with the string `11`, which requires messages free of
//! consecutive ones and makes Bob delete three bits whenever his
//! reconstruction ends in `11`. Bob's reconstruction is exactly the label
//! reduction of [`crate::label`], which is what ties protocol transcripts to
//! tournament-tree paths.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::label::{Alphabet, BitString, LabelState, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    ErrorSymbol,
    Binary,
}

impl Variant {
    fn alphabet(self) -> Alphabet {
        match self {
            Variant::ErrorSymbol => Alphabet::Ternary,
            Variant::Binary => Alphabet::Binary { x: 2 },
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("the binary variant requires a message without consecutive ones")]
    MessageHasConsecutiveOnes,
    #[error("the binary variant transmits bits only")]
    BotInBinary,
    #[error("the exhaustive strategy branches and cannot drive a single run; use the checker")]
    ExhaustiveNotSimulable,
    #[error("protocol exceeded {0} rounds without terminating")]
    RoundLimit(usize),
    #[error("exhaustive check is capped at messages of length {max_len} and budget {max_k}")]
    GuardRail { max_len: usize, max_k: u32 },
}

/// Eve's corruption policy. Corruptions substitute the delivered symbol
/// only; the feedback channel is beyond her reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveStrategy {
    None,
    /// Corrupts each transmitted symbol with probability 1/3 while budget
    /// remains, drawing from a seeded deterministic generator.
    Random { seed: u64 },
    /// Spends the whole budget on the earliest rounds.
    GreedyPrefix,
    /// Placeholder for the exhaustive checker; not runnable as a single run.
    Exhaustive,
}

/// Alice's side of the protocol: the message, a cursor and the manipulation
/// counter tracking how many error signals Bob still has to recognize.
#[derive(Debug, Clone)]
pub struct AliceState<'m> {
    message: &'m BitString,
    cursor: usize,
    counter: u32,
    variant: Variant,
}

impl<'m> AliceState<'m> {
    pub fn new(variant: Variant, message: &'m BitString) -> Result<Self, ProtocolError> {
        if variant == Variant::Binary && message.max_one_run() >= 2 {
            return Err(ProtocolError::MessageHasConsecutiveOnes);
        }
        Ok(AliceState {
            message,
            cursor: 0,
            counter: 0,
            variant,
        })
    }

    pub fn counter(&self) -> u32 {
        self.counter
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// Transmission finished: the whole message is out and no signal pends.
    pub fn done(&self) -> bool {
        self.counter == 0 && self.cursor == self.message.len()
    }

    /// The symbol Alice transmits this round.
    pub fn next_symbol(&self) -> Symbol {
        if self.counter > 0 {
            match self.variant {
                Variant::ErrorSymbol => Symbol::Bot,
                Variant::Binary => Symbol::One,
            }
        } else {
            Symbol::from_bit(self.message.bit(self.cursor))
        }
    }

    /// Updates the cursor and counter from the feedback of one round.
    pub fn observe(&mut self, received: Symbol) {
        let sent = self.next_symbol();
        match self.variant {
            Variant::ErrorSymbol => {
                if self.counter > 0 {
                    // A pending error signal was on the wire.
                    if received == Symbol::Bot {
                        self.counter -= 1;
                    } else {
                        self.counter += 1;
                    }
                } else if received == sent {
                    self.cursor += 1;
                } else if received == Symbol::Bot {
                    // Bob deleted the previous good bit; resend it.
                    self.cursor = self.cursor.saturating_sub(1);
                } else {
                    self.counter += 1;
                }
            }
            Variant::Binary => {
                if self.counter > 0 {
                    if received == Symbol::One {
                        self.counter -= 1;
                    } else {
                        // The stray zero costs two more correct ones.
                        self.counter += 2;
                    }
                } else if received == sent {
                    self.cursor += 1;
                } else if sent == Symbol::Zero {
                    // Bob received a one instead of a zero.
                    let prev_is_one = self.cursor > 0 && self.message.bit(self.cursor - 1) == 1;
                    if prev_is_one {
                        // Bob's reconstruction ended in 11 and he already
                        // deleted three bits; back up two message positions
                        // (clamped at the first bit).
                        self.cursor = self.cursor.saturating_sub(2);
                    } else {
                        self.cursor = self.cursor.saturating_sub(1);
                        self.counter += 1;
                    }
                } else {
                    // Bob received a zero instead of a one.
                    self.counter += 2;
                }
            }
        }
    }
}

/// Bob's side: the received transcript reduces online to his reconstruction.
#[derive(Debug, Clone)]
pub struct BobState {
    label: LabelState,
    received: Vec<Symbol>,
}

impl BobState {
    pub fn new(variant: Variant) -> Self {
        BobState {
            label: LabelState::root(variant.alphabet()),
            received: Vec::new(),
        }
    }

    pub fn receive(&mut self, sym: Symbol) -> Result<(), ProtocolError> {
        self.label = self.label.step(sym).map_err(|_| ProtocolError::BotInBinary)?;
        self.received.push(sym);
        Ok(())
    }

    pub fn decoded(&self) -> &BitString {
        self.label.f()
    }

    pub fn received(&self) -> &[Symbol] {
        &self.received
    }
}

/// Bob's reconstruction of a full received transcript.
pub fn decode(variant: Variant, received: &[Symbol]) -> Result<BitString, ProtocolError> {
    let mut bob = BobState::new(variant);
    for &sym in received {
        bob.receive(sym)?;
    }
    Ok(bob.decoded().clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub sent: Symbol,
    pub received: Symbol,
    pub counter: u32,
    pub decoded: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolRun {
    pub rounds: Vec<RoundRecord>,
    pub decoded: BitString,
    pub corruptions: u32,
}

impl ProtocolRun {
    pub fn transcript(&self) -> Vec<Symbol> {
        self.rounds.iter().map(|r| r.received).collect()
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }
}

enum Adversary {
    None,
    Random(ChaCha8Rng),
    Greedy,
}

impl Adversary {
    fn corrupt(&mut self, variant: Variant, sent: Symbol, budget_left: u32) -> Option<Symbol> {
        if budget_left == 0 {
            return None;
        }
        match self {
            Adversary::None => None,
            Adversary::Greedy => Some(match (variant, sent) {
                (_, Symbol::Zero) => Symbol::One,
                (_, Symbol::One) => Symbol::Zero,
                (_, Symbol::Bot) => Symbol::Zero,
            }),
            Adversary::Random(rng) => {
                if !rng.gen_bool(1.0 / 3.0) {
                    return None;
                }
                let options = substitutions(variant, sent);
                Some(options[rng.gen_range(0..options.len())])
            }
        }
    }
}

/// The symbols Eve may deliver instead of `sent`.
pub fn substitutions(variant: Variant, sent: Symbol) -> Vec<Symbol> {
    match variant {
        Variant::ErrorSymbol => [Symbol::Zero, Symbol::One, Symbol::Bot]
            .into_iter()
            .filter(|&s| s != sent)
            .collect(),
        Variant::Binary => vec![match sent {
            Symbol::Zero => Symbol::One,
            _ => Symbol::Zero,
        }],
    }
}

/// Runs one full transmission of `message` against `eve` with the given
/// corruption budget. When Eve stays within budget the decode always equals
/// the message and the round count stays within `|m| + 2k` (error symbol)
/// or `|m| + 3k` (binary).
pub fn run_protocol(
    variant: Variant,
    message: &BitString,
    eve: &EveStrategy,
    budget: u32,
) -> Result<ProtocolRun, ProtocolError> {
    let mut adversary = match eve {
        EveStrategy::None => Adversary::None,
        EveStrategy::Random { seed } => Adversary::Random(ChaCha8Rng::seed_from_u64(*seed)),
        EveStrategy::GreedyPrefix => Adversary::Greedy,
        EveStrategy::Exhaustive => return Err(ProtocolError::ExhaustiveNotSimulable),
    };
    run_protocol_with(variant, message, budget, |round, sent, budget_left| {
        let _ = round;
        adversary.corrupt(variant, sent, budget_left)
    })
}

/// Like [`run_protocol`] but with an arbitrary corruption callback, called
/// once per round with the round index, the transmitted symbol and the
/// budget still available. Returning a substitution spends one unit.
pub fn run_protocol_with(
    variant: Variant,
    message: &BitString,
    budget: u32,
    mut corrupt: impl FnMut(usize, Symbol, u32) -> Option<Symbol>,
) -> Result<ProtocolRun, ProtocolError> {
    let mut alice = AliceState::new(variant, message)?;
    let mut bob = BobState::new(variant);
    let mut rounds = Vec::new();
    let mut corruptions = 0;
    let fuse = message.len() + 3 * budget as usize + 8;

    while !alice.done() {
        if rounds.len() >= fuse {
            return Err(ProtocolError::RoundLimit(fuse));
        }
        debug_assert!(
            alice.counter() > 0
                || bob.decoded().bits() == &message.bits()[..alice.cursor()],
            "with no pending signals Bob holds exactly the sent prefix"
        );
        let sent = alice.next_symbol();
        let received = match corrupt(rounds.len(), sent, budget - corruptions) {
            Some(sym) if sym != sent && budget > corruptions => {
                corruptions += 1;
                sym
            }
            _ => sent,
        };
        bob.receive(received)?;
        alice.observe(received);
        rounds.push(RoundRecord {
            sent,
            received,
            counter: alice.counter(),
            decoded: bob.decoded().clone(),
        });
    }

    Ok(ProtocolRun {
        rounds,
        decoded: bob.decoded().clone(),
        corruptions,
    })
}

/// Explores every adaptive corruption pattern of at most `k` substitutions
/// and reports whether Bob decodes the message in every branch within the
/// variant's round bound. Guard-railed to short messages and small budgets.
pub fn exhaustive_adversary_check(
    variant: Variant,
    message: &BitString,
    k: u32,
) -> Result<bool, ProtocolError> {
    if message.len() > 8 || k > 2 {
        return Err(ProtocolError::GuardRail { max_len: 8, max_k: 2 });
    }
    let alice = AliceState::new(variant, message)?;
    let bob = LabelState::root(variant.alphabet());
    let slack = match variant {
        Variant::ErrorSymbol => 2,
        Variant::Binary => 3,
    };
    let max_rounds = message.len() + slack * k as usize;
    Ok(search(variant, message, &alice, &bob, k, 0, max_rounds))
}

fn search(
    variant: Variant,
    message: &BitString,
    alice: &AliceState<'_>,
    bob: &LabelState,
    budget: u32,
    round: usize,
    max_rounds: usize,
) -> bool {
    if alice.done() {
        return bob.f() == message;
    }
    if round >= max_rounds {
        return false;
    }
    let sent = alice.next_symbol();
    let mut options = vec![(sent, budget)];
    if budget > 0 {
        for sym in substitutions(variant, sent) {
            options.push((sym, budget - 1));
        }
    }
    for (received, budget_left) in options {
        let Ok(next_bob) = bob.step(received) else {
            return false;
        };
        let mut next_alice = alice.clone();
        next_alice.observe(received);
        if !search(
            variant,
            message,
            &next_alice,
            &next_bob,
            budget_left,
            round + 1,
            max_rounds,
        ) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{parse_symbols, symbols_to_string};

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn clean_runs_transmit_verbatim() {
        let run = run_protocol(Variant::ErrorSymbol, &bits("01"), &EveStrategy::None, 0).unwrap();
        assert_eq!(symbols_to_string(&run.transcript()), "01");
        assert_eq!(run.decoded, bits("01"));
        assert_eq!(run.len(), 2);
    }

    #[test]
    fn empty_message_terminates_immediately() {
        for variant in [Variant::ErrorSymbol, Variant::Binary] {
            let run = run_protocol(variant, &BitString::new(), &EveStrategy::None, 0).unwrap();
            assert!(run.is_empty());
            assert_eq!(run.decoded, BitString::new());
        }
    }

    #[test]
    fn single_corruption_follows_the_worked_trace() {
        // Eve flips the first transmitted zero into a one.
        let run = run_protocol(Variant::ErrorSymbol, &bits("01"), &EveStrategy::GreedyPrefix, 1)
            .unwrap();
        let sent: Vec<Symbol> = run.rounds.iter().map(|r| r.sent).collect();
        assert_eq!(symbols_to_string(&sent), "0E01");
        assert_eq!(symbols_to_string(&run.transcript()), "1E01");
        assert_eq!(run.decoded, bits("01"));
        assert_eq!(run.len(), 4);
    }

    #[test]
    fn binary_variant_recovers_within_three_extra_rounds() {
        let run = run_protocol(Variant::Binary, &bits("010"), &EveStrategy::GreedyPrefix, 1)
            .unwrap();
        assert_eq!(run.decoded, bits("010"));
        assert!(run.len() <= 3 + 3);
    }

    #[test]
    fn binary_variant_rejects_consecutive_ones() {
        assert!(matches!(
            run_protocol(Variant::Binary, &bits("0110"), &EveStrategy::None, 0),
            Err(ProtocolError::MessageHasConsecutiveOnes)
        ));
    }

    #[test]
    fn exhaustive_strategy_is_not_runnable() {
        assert!(matches!(
            run_protocol(Variant::ErrorSymbol, &bits("0"), &EveStrategy::Exhaustive, 1),
            Err(ProtocolError::ExhaustiveNotSimulable)
        ));
    }

    #[test]
    fn decode_matches_the_reduction_rules() {
        let received = parse_symbols("01E").unwrap();
        assert_eq!(decode(Variant::ErrorSymbol, &received).unwrap(), bits("0"));
        let received = parse_symbols("0011").unwrap();
        assert_eq!(decode(Variant::Binary, &received).unwrap(), bits("0"));
        assert_eq!(decode(Variant::Binary, &[]).unwrap(), BitString::new());
        assert!(decode(Variant::Binary, &parse_symbols("0E").unwrap()).is_err());
    }

    #[test]
    fn exhaustive_check_passes_on_small_messages() {
        assert!(exhaustive_adversary_check(Variant::ErrorSymbol, &bits("0101"), 2).unwrap());
        assert!(exhaustive_adversary_check(Variant::Binary, &bits("0100"), 1).unwrap());
        assert!(exhaustive_adversary_check(Variant::Binary, &bits("010"), 0).unwrap());
    }

    #[test]
    fn exhaustive_check_guard_rails() {
        assert!(matches!(
            exhaustive_adversary_check(Variant::ErrorSymbol, &bits("010101010"), 1),
            Err(ProtocolError::GuardRail { .. })
        ));
        assert!(matches!(
            exhaustive_adversary_check(Variant::ErrorSymbol, &bits("0"), 3),
            Err(ProtocolError::GuardRail { .. })
        ));
    }

    #[test]
    fn random_eve_is_deterministic_per_seed() {
        let eve = EveStrategy::Random { seed: 7 };
        let a = run_protocol(Variant::ErrorSymbol, &bits("010101"), &eve, 2).unwrap();
        let b = run_protocol(Variant::ErrorSymbol, &bits("010101"), &eve, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.decoded, bits("010101"));
    }

    #[test]
    fn counter_returns_to_zero_at_termination() {
        for seed in 0..20 {
            let eve = EveStrategy::Random { seed };
            let run = run_protocol(Variant::Binary, &bits("01010"), &eve, 3).unwrap();
            assert_eq!(run.rounds.last().unwrap().counter, 0);
            assert_eq!(run.decoded, bits("01010"));
        }
    }
}
