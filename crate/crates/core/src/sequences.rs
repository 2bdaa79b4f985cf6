//! Sequence generators: the flag-and-reversal sequence, the repeated-block
//! sequence, the prefix-concatenation transform and images under FSTs.

use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fst::FstMachine;
use crate::lz78::lz78_plain_len;
use crate::words::{reverse, BitStreamSource, BitWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("word length {0} too large to enumerate (maximum {MAX_T_SET_LEN})")]
    TooLong(usize),
    #[error("parameter k = {k} must be greater than {min}")]
    KTooSmall { k: usize, min: usize },
    #[error("parameter v must be at least 1")]
    VZero,
    #[error("v = {v} never divides the block length k·t_j for k = {k}")]
    NoThreshold { k: usize, v: usize },
    #[error("transducer can stall forever without output")]
    Stalls,
}

pub const MAX_T_SET_LEN: usize = 26;

/// All words of length `n` avoiding `1^k`, in lexicographic order.
pub fn t_set(n: usize, k: usize) -> Result<Vec<BitWord>, SeqError> {
    if n > MAX_T_SET_LEN {
        return Err(SeqError::TooLong(n));
    }
    Ok(avoiding_words(n, k))
}

pub(crate) fn avoiding_words(n: usize, k: usize) -> Vec<BitWord> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(n: usize, k: usize, run: usize, cur: &mut Vec<bool>, out: &mut Vec<BitWord>) {
        if cur.len() == n {
            out.push(BitWord::from(&cur[..]));
            return;
        }
        cur.push(false);
        go(n, k, 0, cur, out);
        cur.pop();
        if run + 1 < k {
            cur.push(true);
            go(n, k, run + 1, cur, out);
            cur.pop();
        }
    }
    go(n, k, 0, &mut cur, &mut out);
    out
}

fn contains_run(x: &[bool], k: usize) -> bool {
    let mut run = 0;
    for &b in x {
        run = if b { run + 1 } else { 0 };
        if run >= k {
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Flag-and-reversal sequence

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm4Params {
    pub k: usize,
    pub v: usize,
}

impl Thm4Params {
    pub fn new(k: usize, v: usize) -> Result<Self, SeqError> {
        if k <= 2 {
            return Err(SeqError::KTooSmall { k, min: 2 });
        }
        if v == 0 {
            return Err(SeqError::VZero);
        }
        Ok(Thm4Params { k, v })
    }

    /// `f(k) = 2k`, `f(m+1) = f(m) + v + 2`.
    pub fn flag_len(&self, m: usize) -> usize {
        2 * self.k + (m - self.k) * (self.v + 2)
    }
}

/// One zone `X_i · 1^{flag} · Y_i`, where `Y_i` lists the reverses of the
/// `X_i` words in reverse order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zone {
    pub xs: Vec<BitWord>,
    pub flag: usize,
}

impl Zone {
    pub fn x_text(&self) -> BitWord {
        self.xs.iter().flat_map(|w| w.iter().copied()).collect()
    }

    pub fn ys(&self) -> Vec<BitWord> {
        self.xs.iter().rev().map(|w| reverse(w)).collect()
    }

    pub fn y_text(&self) -> BitWord {
        reverse(&self.x_text())
    }

    pub fn text(&self) -> BitWord {
        let mut t = self.x_text();
        t.extend(std::iter::repeat_n(true, self.flag));
        t.extend_from(&self.y_text());
        t
    }

    pub fn len(&self) -> usize {
        2 * self.xs.iter().map(|w| w.len()).sum::<usize>() + self.flag
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// First word starts with 0 and last word ends with 0.
    pub fn has_boundary_zeros(&self) -> bool {
        match (self.xs.first(), self.xs.last()) {
            (Some(a), Some(b)) => !a[0] && !b[b.len() - 1],
            _ => false,
        }
    }
}

/// Stage `S_m` for `m >= k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm4Stage {
    pub m: usize,
    pub palindromes: Vec<BitWord>,
    pub flag: usize,
    pub zones: Vec<Zone>,
}

impl Thm4Stage {
    pub fn palindrome_text(&self) -> BitWord {
        self.palindromes.iter().flat_map(|w| w.iter().copied()).collect()
    }

    pub fn text(&self) -> BitWord {
        let mut t = self.palindrome_text();
        t.extend(std::iter::repeat_n(true, self.flag));
        for z in &self.zones {
            t.extend_from(&z.text());
        }
        t
    }

    pub fn len(&self) -> usize {
        self.palindromes.len() * self.m + self.flag + self.zones.iter().map(Zone::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `S_1 … S_{k-1} 1^k 1^{k+1} … 1^{2k-1}`.
pub fn thm4_prelude(p: Thm4Params) -> BitWord {
    let mut y = BitWord::new();
    for m in 1..p.k {
        for w in avoiding_words(m, usize::MAX) {
            y.extend_from(&w);
        }
    }
    for j in p.k..2 * p.k {
        y.extend(std::iter::repeat_n(true, j));
    }
    y
}

/// Builds `S_m` for `m >= k`: palindromes of `T_m`, then the pairs
/// `{w, w^{-1}}` of the remaining words split over `v+1` zones.
///
/// Zone sizes are `⌊P/v⌋` for the first `v` zones and the remainder for the
/// last, with `P` the number of pairs. A nonempty zone should start with a
/// word beginning in 0 and end with a word ending in 0; these boundary
/// words are reserved first, from the front of the lexicographically
/// sorted pair list, and the remaining pairs fill the zones in order. When
/// too few suitable pairs exist (only for very small `m`), the first free
/// pair is used instead; see [`Zone::has_boundary_zeros`].
pub fn thm4_stage(p: Thm4Params, m: usize) -> Thm4Stage {
    assert!(m >= p.k, "stages below k belong to the prelude");
    let words = avoiding_words(m, p.k);
    let mut palindromes = Vec::new();
    let mut pairs = Vec::new();
    for w in words {
        let r = reverse(&w);
        if r == w {
            palindromes.push(w);
        } else if w < r {
            pairs.push(w);
        }
    }
    let total = pairs.len();
    let base = total / p.v;
    let mut sizes = vec![base; p.v];
    sizes.push(total - base * p.v);

    let mut used = vec![false; total];
    let take = |pred: &dyn Fn(&BitWord) -> bool, used: &mut Vec<bool>| -> Option<usize> {
        let i = (0..total).find(|&i| !used[i] && pred(&pairs[i]))?;
        used[i] = true;
        Some(i)
    };
    let starts_zero = |w: &BitWord| !w[0];
    let both_zero = |w: &BitWord| !w[0] && !w[w.len() - 1];
    let any = |_: &BitWord| true;
    // per zone: (start pair, oriented as is) and optionally (end pair, reversed?)
    let mut anchors: Vec<Option<(usize, Option<(usize, bool)>)>> = Vec::new();
    for &size in &sizes {
        anchors.push(match size {
            0 => None,
            1 => {
                let a = take(&both_zero, &mut used).or_else(|| take(&any, &mut used)).expect("size counts pairs");
                Some((a, None))
            }
            _ => {
                let a = take(&starts_zero, &mut used).or_else(|| take(&any, &mut used)).expect("size counts pairs");
                let b = match take(&starts_zero, &mut used) {
                    Some(b) => (b, true),
                    None => (take(&any, &mut used).expect("size counts pairs"), false),
                };
                Some((a, Some(b)))
            }
        });
    }
    let mut fill = (0..total).filter(|&i| !used[i]);
    let mut zones = Vec::new();
    for (i, (&size, anchor)) in sizes.iter().zip(&anchors).enumerate() {
        let mut xs = Vec::with_capacity(size);
        if let Some((a, end)) = anchor {
            xs.push(pairs[*a].clone());
            if let Some((b, rev)) = end {
                for _ in 0..size - 2 {
                    xs.push(pairs[fill.next().expect("pair count matches zone sizes")].clone());
                }
                xs.push(if *rev { reverse(&pairs[*b]) } else { pairs[*b].clone() });
            }
        }
        zones.push(Zone { xs, flag: p.flag_len(m) + i + 1 });
    }
    Thm4Stage { m, palindromes, flag: p.flag_len(m), zones }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Prelude,
    PreludeFlag,
    Palindromes,
    Flag,
    XZone,
    ZoneFlag,
    YZone,
}

/// One row of the zone-boundary table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub stage: usize,
    pub kind: SegmentKind,
    pub zone: usize,
    pub start: usize,
    pub len: usize,
}

/// The flag-and-reversal sequence for parameters `k > 2`, `v >= 1`.
#[derive(Debug)]
pub struct Thm4Sequence {
    params: Thm4Params,
    memo: Mutex<Vec<Thm4Stage>>,
}

impl Thm4Sequence {
    pub fn new(params: Thm4Params) -> Self {
        Thm4Sequence { params, memo: Mutex::new(Vec::new()) }
    }

    pub fn params(&self) -> Thm4Params {
        self.params
    }

    /// Stages `S_k … S_m`.
    pub fn stages_through(&self, m: usize) -> Vec<Thm4Stage> {
        let mut memo = self.memo.lock().expect("memo lock");
        while self.params.k + memo.len() <= m {
            let next = self.params.k + memo.len();
            memo.push(thm4_stage(self.params, next));
        }
        memo[..(m + 1).saturating_sub(self.params.k)].to_vec()
    }

    /// The prelude and as many stages as needed to cover `n` bits.
    pub fn stages_covering(&self, n: usize) -> (BitWord, Vec<Thm4Stage>) {
        let prelude = thm4_prelude(self.params);
        let mut total = prelude.len();
        let mut m = self.params.k;
        loop {
            if total >= n {
                return (prelude, self.stages_through(m - 1));
            }
            let st = self.stages_through(m);
            total += st.last().expect("stage m built").len();
            m += 1;
        }
    }

    /// `S_1 … S_{k-1} 1^k … 1^{2k-1} S_k … S_m`.
    pub fn through_stage(&self, m: usize) -> BitWord {
        let mut out = thm4_prelude(self.params);
        for st in self.stages_through(m) {
            out.extend_from(&st.text());
        }
        out
    }

    /// Segment table covering at least `n` bits.
    pub fn layout(&self, n: usize) -> Vec<Segment> {
        let p = self.params;
        let (_, stages) = self.stages_covering(n);
        let mut rows = Vec::new();
        let mut pos = 0;
        let mut push = |rows: &mut Vec<Segment>, stage, kind, zone, len| {
            rows.push(Segment { stage, kind, zone, start: pos, len });
            pos += len;
        };
        for m in 1..p.k {
            push(&mut rows, m, SegmentKind::Prelude, 0, m << m);
        }
        for j in p.k..2 * p.k {
            push(&mut rows, p.k - 1, SegmentKind::PreludeFlag, 0, j);
        }
        for st in &stages {
            push(&mut rows, st.m, SegmentKind::Palindromes, 0, st.palindromes.len() * st.m);
            push(&mut rows, st.m, SegmentKind::Flag, 0, st.flag);
            for (i, z) in st.zones.iter().enumerate() {
                let xl = z.xs.len() * st.m;
                push(&mut rows, st.m, SegmentKind::XZone, i + 1, xl);
                push(&mut rows, st.m, SegmentKind::ZoneFlag, i + 1, z.flag);
                push(&mut rows, st.m, SegmentKind::YZone, i + 1, xl);
            }
        }
        rows
    }
}

impl BitStreamSource for Thm4Sequence {
    fn prefix(&self, n: usize) -> BitWord {
        let (mut out, stages) = self.stages_covering(n);
        for st in stages {
            if out.len() >= n {
                break;
            }
            out.extend_from(&st.text());
        }
        out.truncate(n);
        out
    }

    fn label(&self) -> String {
        format!("thm4(k={},v={})", self.params.k, self.params.v)
    }
}

// ---------------------------------------------------------------------------
// Repeated-block sequence

/// How each block `R_j` is drawn from the words of length `k·t_j` avoiding `1^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selector {
    /// Draw this many uniform samples and keep the first one with the
    /// longest plain LZ78 encoding.
    SampleMaxLz(usize),
    /// A single uniform draw.
    FixedSeedHash,
}

impl Default for Selector {
    fn default() -> Self {
        Selector::SampleMaxLz(64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Remark1Params {
    pub k: usize,
    pub v: usize,
    pub selector: Selector,
    pub seed: u64,
}

impl Remark1Params {
    pub fn new(k: usize, v: usize, selector: Selector, seed: u64) -> Result<Self, SeqError> {
        if k <= 8 {
            return Err(SeqError::KTooSmall { k, min: 8 });
        }
        if v == 0 {
            return Err(SeqError::VZero);
        }
        Ok(Remark1Params { k, v, selector, seed })
    }

    /// Like [`Remark1Params::new`] without the lower bound on `k`, for toy runs.
    pub fn unchecked(k: usize, v: usize, selector: Selector, seed: u64) -> Self {
        Remark1Params { k, v, selector, seed }
    }

    /// Index of the first block whose length `v` divides; all later blocks
    /// then also qualify.
    pub fn threshold(&self) -> Result<usize, SeqError> {
        (1..=64)
            .find(|&j| {
                let t = t_j(j, self.k);
                t.checked_mul(self.k).is_some_and(|len| len % self.v == 0)
            })
            .ok_or(SeqError::NoThreshold { k: self.k, v: self.v })
    }
}

/// `t_j = k^{⌈log j / log k⌉}`: the least power of `k` that is at least `j`.
pub fn t_j(j: usize, k: usize) -> usize {
    assert!(j >= 1 && k >= 2);
    let mut t = 1usize;
    while t < j {
        t *= k;
    }
    t
}

fn sample_avoiding(rng: &mut ChaCha8Rng, len: usize, k: usize) -> BitWord {
    loop {
        let w: BitWord = (0..len).map(|_| rng.gen::<bool>()).collect();
        if !contains_run(&w, k) {
            return w;
        }
    }
}

/// Draws block `R_j`. Each block has its own ChaCha stream so blocks can be
/// produced independently.
pub fn select_block(p: &Remark1Params, j: usize) -> BitWord {
    let len = p.k * t_j(j, p.k);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(j as u64);
    match p.selector {
        Selector::FixedSeedHash => sample_avoiding(&mut rng, len, p.k),
        Selector::SampleMaxLz(samples) => {
            let mut best = sample_avoiding(&mut rng, len, p.k);
            let mut best_len = lz78_plain_len(&best);
            for _ in 1..samples.max(1) {
                let w = sample_avoiding(&mut rng, len, p.k);
                let l = lz78_plain_len(&w);
                if l > best_len {
                    best = w;
                    best_len = l;
                }
            }
            best
        }
    }
}

/// `|S_j| = 2|R_j|^2 + k`.
pub fn remark1_block_len(p: &Remark1Params, j: usize) -> usize {
    let r = p.k * t_j(j, p.k);
    2 * r * r + p.k
}

/// `S_j = R_j^{|R_j|} 1^k (R_j^{-1})^{|R_j|}`.
pub fn remark1_block(r: &[bool], k: usize) -> BitWord {
    let mut s = BitWord::with_capacity(2 * r.len() * r.len() + k);
    for _ in 0..r.len() {
        s.extend_from(r);
    }
    s.extend(std::iter::repeat_n(true, k));
    let rr = reverse(r);
    for _ in 0..r.len() {
        s.extend_from(&rr);
    }
    s
}

#[derive(Debug)]
pub struct Remark1Sequence {
    params: Remark1Params,
    blocks: Mutex<Vec<BitWord>>,
}

impl Remark1Sequence {
    pub fn new(params: Remark1Params) -> Self {
        Remark1Sequence { params, blocks: Mutex::new(Vec::new()) }
    }

    pub fn params(&self) -> Remark1Params {
        self.params
    }

    /// `R_1 … R_j`.
    pub fn blocks(&self, j: usize) -> Vec<BitWord> {
        let mut memo = self.blocks.lock().expect("block lock");
        while memo.len() < j {
            let next = memo.len() + 1;
            memo.push(select_block(&self.params, next));
        }
        memo[..j].to_vec()
    }

    /// Number of blocks needed to cover `n` bits.
    pub fn blocks_covering(&self, n: usize) -> usize {
        let mut total = 0;
        let mut j = 0;
        while total < n {
            j += 1;
            total += remark1_block_len(&self.params, j);
        }
        j
    }

    /// End offsets of `S_1, S_2, …` up to and including the first at or past `n`.
    pub fn boundaries(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut total = 0;
        let mut j = 0;
        while total < n {
            j += 1;
            total += remark1_block_len(&self.params, j);
            out.push(total);
        }
        out
    }

    /// `|S_1 … S_{p-1}|` for the divisibility threshold `p`.
    pub fn counting_prefix_len(&self) -> Result<usize, SeqError> {
        let p = self.params.threshold()?;
        Ok((1..p).map(|j| remark1_block_len(&self.params, j)).sum())
    }

    pub fn through_block(&self, j: usize) -> BitWord {
        let mut out = BitWord::new();
        for r in self.blocks(j) {
            out.extend_from(&remark1_block(&r, self.params.k));
        }
        out
    }
}

impl BitStreamSource for Remark1Sequence {
    fn prefix(&self, n: usize) -> BitWord {
        let j = self.blocks_covering(n);
        let mut out = BitWord::with_capacity(n);
        let k = self.params.k;
        for r in self.blocks(j) {
            let need = n - out.len();
            let block = remark1_block(&r, k);
            out.extend_from(&block[..need.min(block.len())]);
            if out.len() == n {
                break;
            }
        }
        out
    }

    fn label(&self) -> String {
        format!("remark1(k={},v={},seed={})", self.params.k, self.params.v, self.params.seed)
    }
}

// ---------------------------------------------------------------------------
// Transforms

/// `S' = x_1 x_2 x_3 …` with `x_i = S ↾ i`.
pub struct PrefSequence<S> {
    inner: S,
}

impl<S: BitStreamSource> PrefSequence<S> {
    pub fn new(inner: S) -> Self {
        PrefSequence { inner }
    }
}

impl<S: BitStreamSource> BitStreamSource for PrefSequence<S> {
    fn prefix(&self, n: usize) -> BitWord {
        // smallest i with i(i+1)/2 >= n
        let mut i = 0;
        while i * (i + 1) / 2 < n {
            i += 1;
        }
        let base = self.inner.prefix(i);
        let mut out = BitWord::with_capacity(n);
        'outer: for len in 1..=i {
            for &b in &base[..len] {
                if out.len() == n {
                    break 'outer;
                }
                out.push(b);
            }
        }
        out
    }

    fn label(&self) -> String {
        format!("pref({})", self.inner.label())
    }
}

pub fn pref_sequence<S: BitStreamSource>(s: S) -> PrefSequence<S> {
    PrefSequence::new(s)
}

/// The image `M(S)` of a sequence under an FST that cannot stall forever.
pub struct FstImage<S> {
    inner: S,
    machine: FstMachine,
}

impl<S: BitStreamSource> FstImage<S> {
    pub fn new(inner: S, machine: FstMachine) -> Result<Self, SeqError> {
        if machine.max_output_stall().is_none() {
            return Err(SeqError::Stalls);
        }
        Ok(FstImage { inner, machine })
    }

    /// Smallest source length `m` with `|M(S ↾ m)| >= n`, with that image.
    pub fn source_len_for(&self, n: usize) -> (usize, BitWord) {
        let mut m = n.max(16);
        loop {
            let src = self.inner.prefix(m);
            let (out, _) = self.machine.run(&src);
            if out.len() >= n {
                // shrink to the first source length reaching n
                let mut q = 0;
                let mut produced = 0;
                for (i, &b) in src.iter().enumerate() {
                    produced += self.machine.nu(q, b).len();
                    q = self.machine.delta(q, b);
                    if produced >= n {
                        return (i + 1, self.machine.run(&src[..=i]).0);
                    }
                }
                return (0, out);
            }
            m *= 2;
        }
    }
}

impl<S: BitStreamSource> BitStreamSource for FstImage<S> {
    fn prefix(&self, n: usize) -> BitWord {
        if n == 0 {
            return BitWord::new();
        }
        let (_, mut out) = self.source_len_for(n);
        out.truncate(n);
        out
    }

    fn label(&self) -> String {
        format!("fst-image({})", self.inner.label())
    }
}
