//! LZ78 parsing and code-length accounting.
//!
//! Phrase `i >= 1` is `x_i = x_{l(i)} b_i` with `x_0 = λ`. Encoded lengths
//! count the pointer/literal pairs only; no terminator is added.

use std::fmt;

use thiserror::Error;

use crate::words::BitWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Lz78Error {
    #[error("phrase {index} points to {pointer}, which is not an earlier phrase")]
    DanglingPointer { index: usize, pointer: usize },
    #[error("malformed pair {0:?} (expected pointer:bit)")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coding {
    /// Pointer into a dictionary of `i` entries in `⌈log2 i⌉` bits.
    Plain,
    /// Pointer `l(i)` as the Elias gamma code of `l(i)+1`.
    Gamma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lz78Parse {
    pub phrases: Vec<BitWord>,
    pub pointers: Vec<usize>,
    /// Final bit of each phrase. A trailing phrase that repeats an earlier
    /// one still records its own last bit.
    pub last_bits: Vec<bool>,
    pub encoded_len_plain: usize,
    pub encoded_len_gamma: usize,
}

impl Lz78Parse {
    pub fn pairs(&self) -> Vec<(usize, bool)> {
        self.pointers.iter().copied().zip(self.last_bits.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }
}

impl fmt::Display for Lz78Parse {
    /// `pointer:bit` pairs separated by commas.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(p, b)| format!("{}:{}", p, *b as u8)).collect();
        f.write_str(&parts.join(","))
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn gamma_len(n: usize) -> usize {
    debug_assert!(n >= 1);
    let bits = (usize::BITS - n.leading_zeros()) as usize;
    2 * bits - 1
}

fn plain_cost(i: usize) -> usize {
    ceil_log2(i) + 1
}

fn gamma_cost(pointer: usize) -> usize {
    gamma_len(pointer + 1) + 1
}

// trie node: children indexed by bit, value = phrase index
struct Trie {
    children: Vec<[u32; 2]>,
}

const NONE: u32 = u32::MAX;

impl Trie {
    fn new() -> Self {
        Trie { children: vec![[NONE, NONE]] }
    }
}

/// Greedy parse: each phrase is the longest dictionary entry extended by one bit.
pub fn lz78_parse(x: &[bool]) -> Lz78Parse {
    let mut trie = Trie::new();
    let mut p = Lz78Parse {
        phrases: Vec::new(),
        pointers: Vec::new(),
        last_bits: Vec::new(),
        encoded_len_plain: 0,
        encoded_len_gamma: 0,
    };
    let mut start = 0;
    while start < x.len() {
        let mut node = 0u32;
        let mut i = start;
        loop {
            let child = trie.children[node as usize][x[i] as usize];
            if child == NONE {
                // new phrase x[start..=i]
                let idx = trie.children.len() as u32;
                trie.children[node as usize][x[i] as usize] = idx;
                trie.children.push([NONE, NONE]);
                p.pointers.push(node as usize);
                p.last_bits.push(x[i]);
                p.phrases.push(BitWord::from(&x[start..=i]));
                start = i + 1;
                break;
            }
            if i + 1 == x.len() {
                // input ends inside an existing phrase: emit it again
                p.pointers.push(node as usize);
                p.last_bits.push(x[i]);
                p.phrases.push(BitWord::from(&x[start..=i]));
                start = i + 1;
                break;
            }
            node = child;
            i += 1;
        }
    }
    let mut plain = 0;
    let mut gamma = 0;
    for (i, &ptr) in p.pointers.iter().enumerate() {
        plain += plain_cost(i + 1);
        gamma += gamma_cost(ptr);
    }
    p.encoded_len_plain = plain;
    p.encoded_len_gamma = gamma;
    p
}

pub fn lz78_encoded_len(p: &Lz78Parse, coding: Coding) -> usize {
    match coding {
        Coding::Plain => p.encoded_len_plain,
        Coding::Gamma => p.encoded_len_gamma,
    }
}

/// Plain-coded length of the parse of `x`, computed without storing phrases.
pub fn lz78_plain_len(x: &[bool]) -> usize {
    lz78_lens(x).0
}

/// `(plain, gamma)` encoded lengths of the parse of `x`.
pub fn lz78_lens(x: &[bool]) -> (usize, usize) {
    let mut children: Vec<[u32; 2]> = vec![[NONE, NONE]];
    let mut phrases = 0usize;
    let mut plain = 0;
    let mut gamma = 0;
    let mut node = 0u32;
    for (i, &b) in x.iter().enumerate() {
        let child = children[node as usize][b as usize];
        if child == NONE {
            children[node as usize][b as usize] = children.len() as u32;
            children.push([NONE, NONE]);
            phrases += 1;
            plain += plain_cost(phrases);
            gamma += gamma_cost(node as usize);
            node = 0;
        } else if i + 1 == x.len() {
            phrases += 1;
            plain += plain_cost(phrases);
            gamma += gamma_cost(node as usize);
        } else {
            node = child;
        }
    }
    (plain, gamma)
}

/// Rebuilds the input from `(pointer, bit)` pairs.
pub fn lz78_decode(pairs: &[(usize, bool)]) -> Result<BitWord, Lz78Error> {
    let mut phrases: Vec<BitWord> = vec![BitWord::new()];
    let mut out = BitWord::new();
    for (i, &(ptr, b)) in pairs.iter().enumerate() {
        let index = i + 1;
        if ptr >= index {
            return Err(Lz78Error::DanglingPointer { index, pointer: ptr });
        }
        let mut phrase = phrases[ptr].clone();
        phrase.push(b);
        out.extend_from(&phrase);
        phrases.push(phrase);
    }
    Ok(out)
}

/// Parses `pointer:bit` pairs separated by commas; an empty string is the
/// empty list.
pub fn parse_pairs(s: &str) -> Result<Vec<(usize, bool)>, Lz78Error> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let (p, b) = part.split_once(':').ok_or_else(|| Lz78Error::Malformed(part.into()))?;
            let p: usize = p.parse().map_err(|_| Lz78Error::Malformed(part.into()))?;
            let b = match b {
                "0" => false,
                "1" => true,
                _ => return Err(Lz78Error::Malformed(part.into())),
            };
            Ok((p, b))
        })
        .collect()
}
