//! String-reduction labels for tournament vertices.
//!
//! Every vertex of a robust tournament tree carries a label `(f, e)`: the
//! reduced form `f` of the edge-symbol string spelled by its root path, and
//! the number `e` of error signals cancelled while reducing. The ternary
//! alphabet cancels `0⊥`, `1⊥` and leading `⊥`; the binary alphabet cancels
//! the prefix `1^x` and substrings `01^x`. Reduction is implemented as an
//! online left-to-right scan so a child label is computable from its parent
//! in amortized constant time.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A channel symbol. `Bot` is the dedicated error symbol, written `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Bot,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Bot => 'E',
        }
    }

    pub fn from_char(c: char) -> Result<Self, LabelError> {
        match c {
            '0' => Ok(Symbol::Zero),
            '1' => Ok(Symbol::One),
            'E' => Ok(Symbol::Bot),
            other => Err(LabelError::BadSymbol(other)),
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Symbol::Zero
        } else {
            Symbol::One
        }
    }

    pub fn is_bit(self) -> bool {
        self != Symbol::Bot
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Parses a string over `0`, `1`, `E` into a symbol sequence.
pub fn parse_symbols(s: &str) -> Result<Vec<Symbol>, LabelError> {
    s.chars().map(Symbol::from_char).collect()
}

/// Renders a symbol sequence as its `0`/`1`/`E` string.
pub fn symbols_to_string(s: &[Symbol]) -> String {
    s.iter().map(|sym| sym.as_char()).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("invalid symbol character {0:?} (expected '0', '1' or 'E')")]
    BadSymbol(char),
    #[error("error symbol is not part of the binary alphabet")]
    BotInBinary,
    #[error("run-length parameter x must be at least 2, got {0}")]
    BadRunLength(u8),
}

/// A pure bit string. Used both for reduced labels and for seed names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new() -> Self {
        BitString(Vec::new())
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitString(bits.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn pop(&mut self) -> Option<u8> {
        self.0.pop()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn truncate(&mut self, len: usize) {
        self.0.truncate(len);
    }

    /// Number of consecutive ones at the end of the string.
    pub fn trailing_ones(&self) -> usize {
        self.0.iter().rev().take_while(|&&b| b == 1).count()
    }

    /// Longest run of consecutive ones anywhere in the string.
    pub fn max_one_run(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for &b in &self.0 {
            if b == 1 {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }

    pub fn starts_with(&self, prefix: &BitString) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// The prefix left after removing the last `l` bits (empty if `l` exceeds the length).
    pub fn drop_last(&self, l: usize) -> BitString {
        if l >= self.0.len() {
            BitString::new()
        } else {
            BitString(self.0[..self.0.len() - l].to_vec())
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().map(|&b| Symbol::from_bit(b))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => return Err(LabelError::BadSymbol(other)),
            }
        }
        Ok(BitString(bits))
    }
}

/// Which cancellation rule a label obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `{0, 1, ⊥}`: cancel `0⊥`, `1⊥` and leading `⊥`.
    Ternary,
    /// `{0, 1}` with run-length `x`: cancel the prefix `1^x` and substrings `01^x`.
    Binary { x: u8 },
}

impl Alphabet {
    pub fn binary(x: u8) -> Result<Self, LabelError> {
        if x < 2 {
            return Err(LabelError::BadRunLength(x));
        }
        Ok(Alphabet::Binary { x })
    }

    pub fn accepts(self, sym: Symbol) -> bool {
        match self {
            Alphabet::Ternary => true,
            Alphabet::Binary { .. } => sym.is_bit(),
        }
    }
}

/// The reduced string and error count carried by a tree vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelState {
    f: BitString,
    e: u32,
    alphabet: Alphabet,
}

impl LabelState {
    /// The empty label `(ε, 0)` at the root of a construction.
    pub fn root(alphabet: Alphabet) -> Self {
        LabelState {
            f: BitString::new(),
            e: 0,
            alphabet,
        }
    }

    /// Rebuilds a label from explicit parts. `f` must already be reduced.
    pub fn from_parts(f: BitString, e: u32, alphabet: Alphabet) -> Self {
        debug_assert!(is_reduced(&f, alphabet));
        LabelState { f, e, alphabet }
    }

    pub fn f(&self) -> &BitString {
        &self.f
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// Appends one symbol, applying the cancellation rule of the alphabet.
    ///
    /// Equivalent to reducing `s · sym` for any transmission string `s` that
    /// reduces to this label, but runs in amortized constant time.
    pub fn step(&self, sym: Symbol) -> Result<LabelState, LabelError> {
        let mut next = self.clone();
        next.step_mut(sym)?;
        Ok(next)
    }

    fn step_mut(&mut self, sym: Symbol) -> Result<(), LabelError> {
        match self.alphabet {
            Alphabet::Ternary => {
                match sym {
                    Symbol::Zero => self.f.push(0),
                    Symbol::One => self.f.push(1),
                    Symbol::Bot => {
                        // Deletes the last symbol, or is dropped as a leading
                        // error symbol when f is already empty.
                        self.f.pop();
                        self.e += 1;
                    }
                }
                Ok(())
            }
            Alphabet::Binary { x } => {
                let x = x as usize;
                match sym {
                    Symbol::Zero => self.f.push(0),
                    Symbol::One => {
                        self.f.push(1);
                        if self.f.trailing_ones() == x {
                            // Cancel the run of x ones plus the single zero in
                            // front of it, if one exists.
                            self.f.truncate(self.f.len() - x);
                            if !self.f.is_empty() {
                                debug_assert_eq!(self.f.last(), Some(0));
                                self.f.pop();
                            }
                            self.e += 1;
                        }
                    }
                    Symbol::Bot => return Err(LabelError::BotInBinary),
                }
                Ok(())
            }
        }
    }
}

/// True when `f` contains no pattern the alphabet would cancel.
pub fn is_reduced(f: &BitString, alphabet: Alphabet) -> bool {
    match alphabet {
        Alphabet::Ternary => true,
        Alphabet::Binary { x } => f.max_one_run() < x as usize,
    }
}

/// Reduces a ternary-alphabet transmission string to `(f, e)`.
pub fn reduce_ternary(s: &[Symbol]) -> LabelState {
    let mut state = LabelState::root(Alphabet::Ternary);
    for &sym in s {
        state.step_mut(sym).expect("ternary accepts every symbol");
    }
    state
}

/// Reduces a binary transmission string to `(f, e)` under run-length `x`.
pub fn reduce_binary(s: &BitString, x: u8) -> LabelState {
    let alphabet = Alphabet::binary(x).expect("run length must be >= 2");
    let mut state = LabelState::root(alphabet);
    for sym in s.symbols() {
        state.step_mut(sym).expect("bit strings hold no error symbol");
    }
    state
}

/// Drops the last `l` bits of `s`; the empty string when `l > |s|`.
pub fn prefix_drop_ternary(s: &BitString, l: usize) -> BitString {
    s.drop_last(l)
}

/// The prefix of a reduced `s` that survives `l` further detected errors.
///
/// Appends ones to `s` until either `l` cancellations have fired or the
/// string has emptied, and returns the reduced remainder. The result is
/// always a prefix of `s`.
pub fn prefix_drop_binary(s: &BitString, l: usize, x: u8) -> BitString {
    let alphabet = Alphabet::binary(x).expect("run length must be >= 2");
    debug_assert!(is_reduced(s, alphabet), "prefix drop expects a reduced string");
    let mut state = LabelState::from_parts(s.clone(), 0, alphabet);
    while state.e() < l as u32 && !state.f().is_empty() {
        state.step_mut(Symbol::One).expect("one is always a bit");
    }
    state.f
}

/// Count of length-`r` bit strings with no run of `x` consecutive ones.
///
/// Follows the x-step additive recurrence (Fibonacci at `x = 2`, tribonacci
/// at `x = 3`), saturating instead of overflowing.
pub fn valid_name_count(r: usize, x: u8) -> u128 {
    let x = x.max(1) as usize;
    let mut counts: Vec<u128> = Vec::with_capacity(r + 1);
    for len in 0..=r {
        let value = if len < x {
            1u128 << len
        } else {
            counts[len - x..len]
                .iter()
                .fold(0u128, |acc, &c| acc.saturating_add(c))
        };
        counts.push(value);
    }
    counts[r]
}

/// Smallest name length `r` whose valid-name count reaches `n`.
pub fn min_name_length(n: u64, x: u8) -> usize {
    assert!(n >= 2, "a tournament needs at least two players");
    assert!(x >= 2, "run length must be >= 2");
    let mut r = 1;
    while valid_name_count(r, x) < n as u128 {
        r += 1;
    }
    r
}

/// All length-`r` bit strings without a run of `x` ones, in lexicographic order.
pub fn seed_names(r: usize, x: u8) -> Vec<BitString> {
    assert!(x >= 2, "run length must be >= 2");
    let mut out = Vec::new();
    let mut current = BitString::new();
    enumerate_names(&mut current, r, x as usize, &mut out);
    out
}

fn enumerate_names(current: &mut BitString, r: usize, x: usize, out: &mut Vec<BitString>) {
    if current.len() == r {
        out.push(current.clone());
        return;
    }
    current.push(0);
    enumerate_names(current, r, x, out);
    current.pop();
    if current.trailing_ones() + 1 < x {
        current.push(1);
        enumerate_names(current, r, x, out);
        current.pop();
    }
}
