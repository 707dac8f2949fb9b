//! Shared test oracles, independent of the library's online reduction path.
//!
//! The batch reducers below implement "exhaustively remove" literally: scan
//! the whole string for a removable unit, delete it, count it, repeat. They
//! support both leftmost-first and rightmost-first orders so confluence can
//! be observed rather than assumed.

use knockout::{BitString, Symbol};
use rand::Rng;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Order {
    LeftmostFirst,
    RightmostFirst,
}

/// Exhaustive batch reduction over {0, 1, E}: removes `0E`, `1E` and leading
/// `E` symbols until none remain.
pub fn batch_reduce_ternary(s: &[Symbol], order: Order) -> (Vec<Symbol>, u32) {
    let mut work: Vec<Symbol> = s.to_vec();
    let mut removed = 0;
    loop {
        let mut positions = Vec::new();
        if work.first() == Some(&Symbol::Bot) {
            positions.push((0usize, 1usize));
        }
        for i in 0..work.len().saturating_sub(1) {
            if work[i] != Symbol::Bot && work[i + 1] == Symbol::Bot {
                positions.push((i, 2));
            }
        }
        let pick = match order {
            Order::LeftmostFirst => positions.first().copied(),
            Order::RightmostFirst => positions.last().copied(),
        };
        match pick {
            Some((at, len)) => {
                work.drain(at..at + len);
                removed += 1;
            }
            None => return (work, removed),
        }
    }
}

/// Exhaustive batch reduction over bits: removes the prefix `1^x` and
/// substrings `01^x` until none remain.
pub fn batch_reduce_binary(s: &BitString, x: u8, order: Order) -> (BitString, u32) {
    let x = x as usize;
    let mut work: Vec<u8> = s.bits().to_vec();
    let mut removed = 0;
    loop {
        let mut positions = Vec::new();
        if work.len() >= x && work[..x].iter().all(|&b| b == 1) {
            positions.push((0usize, x));
        }
        for i in 0..work.len().saturating_sub(x) {
            if work[i] == 0 && work[i + 1..i + 1 + x].iter().all(|&b| b == 1) {
                positions.push((i, x + 1));
            }
        }
        let pick = match order {
            Order::LeftmostFirst => positions.first().copied(),
            Order::RightmostFirst => positions.last().copied(),
        };
        match pick {
            Some((at, len)) => {
                work.drain(at..at + len);
                removed += 1;
            }
            None => return (BitString::from_bits(&work), removed),
        }
    }
}

/// Fibonacci by the plain additive recurrence, `F(1) = F(2) = 1`.
pub fn fibonacci(n: u32) -> u64 {
    match n {
        0 => 0,
        1 | 2 => 1,
        _ => {
            let (mut a, mut b) = (1u64, 1u64);
            for _ in 2..n {
                let next = a + b;
                a = b;
                b = next;
            }
            b
        }
    }
}

pub fn random_symbols(rng: &mut impl Rng, max_len: usize) -> Vec<Symbol> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| match rng.gen_range(0..3) {
            0 => Symbol::Zero,
            1 => Symbol::One,
            _ => Symbol::Bot,
        })
        .collect()
}

pub fn random_bits(rng: &mut impl Rng, max_len: usize) -> BitString {
    let len = rng.gen_range(0..=max_len);
    let bits: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=1)).collect();
    BitString::from_bits(&bits)
}

/// A random message without runs of `x` ones, built left to right.
pub fn random_sparse_bits(rng: &mut impl Rng, max_len: usize, x: usize) -> BitString {
    let len = rng.gen_range(0..=max_len);
    let mut out = BitString::new();
    for _ in 0..len {
        let bit = if out.trailing_ones() + 1 >= x {
            0
        } else {
            rng.gen_range(0..=1)
        };
        out.push(bit);
    }
    out
}

/// All bit strings of the given length, lexicographically.
pub fn all_bitstrings(len: usize) -> Vec<BitString> {
    let mut out = Vec::new();
    for value in 0u64..(1 << len) {
        let bits: Vec<u8> = (0..len)
            .map(|i| ((value >> (len - 1 - i)) & 1) as u8)
            .collect();
        out.push(BitString::from_bits(&bits));
    }
    out
}
