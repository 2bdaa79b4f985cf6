//! Binary words, the string operators used throughout the crate, and
//! prefix-consistent bit stream sources.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid character {0:?} in bit string (expected '0' or '1')")]
    InvalidChar(char),
    #[error("prefix length {n} too short for block length {b} (need n >= 2^b)")]
    PrefixTooShort { n: usize, b: usize },
    #[error("block length {0} out of range 1..=16")]
    BlockLength(usize),
}

/// A finite binary string. Index 0 is the leftmost bit.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord(Vec<bool>);

impl BitWord {
    pub fn new() -> Self {
        BitWord(Vec::new())
    }

    pub fn with_capacity(n: usize) -> Self {
        BitWord(Vec::with_capacity(n))
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitWord(bits)
    }

    /// Parses ASCII bits, skipping any whitespace.
    pub fn parse_lenient(s: &str) -> Result<Self, WordError> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(WordError::InvalidChar(c)),
            }
        }
        Ok(BitWord(bits))
    }

    /// `b^n`.
    pub fn repeat_bit(b: bool, n: usize) -> Self {
        BitWord(vec![b; n])
    }

    pub fn ones(n: usize) -> Self {
        Self::repeat_bit(true, n)
    }

    pub fn zeros(n: usize) -> Self {
        Self::repeat_bit(false, n)
    }

    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }

    pub fn extend_from(&mut self, bits: &[bool]) {
        self.0.extend_from_slice(bits);
    }

    pub fn truncate(&mut self, n: usize) {
        self.0.truncate(n);
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }

    /// `x ↾ n`, clamped to the word length.
    pub fn prefix(&self, n: usize) -> BitWord {
        BitWord(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &[bool]) -> bool {
        other.starts_with(&self.0)
    }

    pub fn concat(&self, other: &[bool]) -> BitWord {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl Deref for BitWord {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl From<&[bool]> for BitWord {
    fn from(bits: &[bool]) -> Self {
        BitWord(bits.to_vec())
    }
}

impl FromIterator<bool> for BitWord {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitWord(iter.into_iter().collect())
    }
}

impl Extend<bool> for BitWord {
    fn extend<I: IntoIterator<Item = bool>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl FromStr for BitWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c => return Err(WordError::InvalidChar(c)),
            }
        }
        Ok(BitWord(bits))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("λ")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

/// Convenience for tests and builders: panics on anything but '0'/'1'.
pub fn bw(s: &str) -> BitWord {
    s.parse().expect("bit literal")
}

/// `d(x)`: every bit doubled.
pub fn double(x: &[bool]) -> BitWord {
    x.iter().flat_map(|&b| [b, b]).collect()
}

/// `x^{-1}`.
pub fn reverse(x: &[bool]) -> BitWord {
    x.iter().rev().copied().collect()
}

/// `pow_k(x) = x^{|x|^k}`.
pub fn pow_k(x: &[bool], k: u32) -> BitWord {
    let copies = x.len().pow(k);
    let mut out = BitWord::with_capacity(copies * x.len());
    for _ in 0..copies {
        out.extend_from(x);
    }
    out
}

/// `x^n` for an explicit repetition count.
pub fn repeat(x: &[bool], n: usize) -> BitWord {
    let mut out = BitWord::with_capacity(n * x.len());
    for _ in 0..n {
        out.extend_from(x);
    }
    out
}

/// `pref(x) = x↾1 · x↾2 · … · x`.
pub fn pref(x: &[bool]) -> BitWord {
    let mut out = BitWord::with_capacity(x.len() * (x.len() + 1) / 2);
    for i in 1..=x.len() {
        out.extend_from(&x[..i]);
    }
    out
}

/// Binary representation of `n` without leading zeros (`0` for zero).
pub fn binary(n: u64) -> BitWord {
    if n == 0 {
        return bw("0");
    }
    let width = 64 - n.leading_zeros();
    (0..width).rev().map(|i| (n >> i) & 1 == 1).collect()
}

/// Produces `S ↾ n` of an infinite binary sequence. Implementations must be
/// prefix-consistent and deterministic for fixed parameters.
pub trait BitStreamSource: Send + Sync {
    fn prefix(&self, n: usize) -> BitWord;

    fn label(&self) -> String;
}

impl<T: BitStreamSource + ?Sized> BitStreamSource for Box<T> {
    fn prefix(&self, n: usize) -> BitWord {
        (**self).prefix(n)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

impl<T: BitStreamSource + ?Sized> BitStreamSource for std::sync::Arc<T> {
    fn prefix(&self, n: usize) -> BitWord {
        (**self).prefix(n)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

/// `p^ω` for a nonempty pattern `p`; `0^ω` is `Periodic::new(bw("0"))`.
#[derive(Debug, Clone)]
pub struct Periodic {
    pattern: BitWord,
}

impl Periodic {
    pub fn new(pattern: BitWord) -> Self {
        assert!(!pattern.is_empty(), "periodic pattern must be nonempty");
        Periodic { pattern }
    }

    pub fn zeros() -> Self {
        Periodic::new(bw("0"))
    }
}

impl BitStreamSource for Periodic {
    fn prefix(&self, n: usize) -> BitWord {
        (0..n).map(|i| self.pattern[i % self.pattern.len()]).collect()
    }

    fn label(&self) -> String {
        format!("periodic({})", self.pattern)
    }
}

/// Binary Champernowne sequence: all nonempty words listed by length, then
/// lexicographically (0, 1, 00, 01, 10, 11, 000, …).
#[derive(Debug, Clone, Default)]
pub struct Champernowne;

impl BitStreamSource for Champernowne {
    fn prefix(&self, n: usize) -> BitWord {
        let mut out = BitWord::with_capacity(n);
        let mut len = 1u32;
        'outer: loop {
            for v in 0u64..(1u64 << len) {
                for i in (0..len).rev() {
                    if out.len() == n {
                        break 'outer;
                    }
                    out.push((v >> i) & 1 == 1);
                }
            }
            len += 1;
        }
        out
    }

    fn label(&self) -> String {
        "champernowne".into()
    }
}

/// Uniform pseudo-random bits from a seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct SeededRandom {
    seed: u64,
}

impl SeededRandom {
    pub fn new(seed: u64) -> Self {
        SeededRandom { seed }
    }
}

impl BitStreamSource for SeededRandom {
    fn prefix(&self, n: usize) -> BitWord {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..n).map(|_| rng.gen::<bool>()).collect()
    }

    fn label(&self) -> String {
        format!("random(seed={})", self.seed)
    }
}

/// Largest deviation `|freq(w) − 2^{-b}|` over all `w ∈ {0,1}^b`, counting
/// overlapping occurrences in `S ↾ n`.
pub fn block_frequency_deviation(
    source: &dyn BitStreamSource,
    n: usize,
    b: usize,
) -> Result<f64, WordError> {
    if b == 0 || b > 16 {
        return Err(WordError::BlockLength(b));
    }
    if n < (1usize << b) {
        return Err(WordError::PrefixTooShort { n, b });
    }
    let prefix = source.prefix(n);
    Ok(block_frequency_deviation_of(&prefix, b))
}

pub(crate) fn block_frequency_deviation_of(x: &[bool], b: usize) -> f64 {
    let windows = x.len() + 1 - b;
    let mut counts = vec![0u64; 1 << b];
    let mask = (1usize << b) - 1;
    let mut acc = 0usize;
    for (i, &bit) in x.iter().enumerate() {
        acc = ((acc << 1) | bit as usize) & mask;
        if i + 1 >= b {
            counts[acc] += 1;
        }
    }
    let expected = 1.0 / (1u64 << b) as f64;
    counts
        .iter()
        .map(|&c| (c as f64 / windows as f64 - expected).abs())
        .fold(0.0, f64::max)
}
