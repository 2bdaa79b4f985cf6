//! Binary representations of machines, bounded enumeration, and `k`-bit
//! descriptional complexity.
//!
//! FST codewords: `1^{|Q|}0`, then for each `(q, b)` in row-major order the
//! next state in `⌈log2 |Q|⌉` bits and the output `w` as `1^{|w|}0w`. The
//! start state is index 0.
//!
//! PB codewords: `1^{|Q|}0 1^k0`, a final-state bitmask of `|Q|` bits, then
//! for each non-final `q`, symbol `0,1,⊣,⊢` and pebble mask in order either
//! `0` (undefined) or `1`, the next state, a 2-bit action and the output.
//!
//! Both codes are prefix-free, so a codeword is recovered from a
//! zero-padded hex string.

use std::collections::{BTreeMap, HashSet, VecDeque};

use itertools::Itertools;
use thiserror::Error;

use crate::fst::{FstMachine, State};
use crate::pebble::{pb_run_with, Action, PebbleMachine, RunOptions, Symbol, Transition};
use crate::words::BitWord;

/// Largest enumeration bound for FST codewords.
pub const MAX_FST_K: usize = 24;
/// Largest enumeration bound for PB codewords.
pub const MAX_PB_K: usize = 18;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("codeword ends early")]
    Truncated,
    #[error("codeword has {0} trailing bits")]
    Trailing(usize),
    #[error("machine has no states")]
    NoStates,
    #[error("next state {0} out of range")]
    BadState(usize),
    #[error("invalid machine: {0}")]
    Machine(String),
    #[error("invalid hex: {0}")]
    Hex(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexityError {
    #[error("enumeration bound {k} exceeds the limit {max}")]
    BoundTooLarge { k: usize, max: usize },
    #[error("need at least two sample points, got {0}")]
    TooFewPoints(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Fst,
    Pb,
}

/// Shortest description found: `value = None` means no machine in range
/// produces the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityResult {
    pub value: Option<usize>,
    /// `(machine description, input)` attaining `value`.
    pub witness: Option<(String, BitWord)>,
    pub exact: bool,
}

impl ComplexityResult {
    fn infinite(exact: bool) -> Self {
        ComplexityResult { value: None, witness: None, exact }
    }
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

struct Reader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn bit(&mut self) -> Result<bool, CodecError> {
        let b = *self.bits.get(self.pos).ok_or(CodecError::Truncated)?;
        self.pos += 1;
        Ok(b)
    }

    fn unary(&mut self) -> Result<usize, CodecError> {
        let mut n = 0;
        while self.bit()? {
            n += 1;
        }
        Ok(n)
    }

    fn fixed(&mut self, width: usize) -> Result<usize, CodecError> {
        let mut v = 0;
        for _ in 0..width {
            v = (v << 1) | self.bit()? as usize;
        }
        Ok(v)
    }

    fn word(&mut self) -> Result<BitWord, CodecError> {
        let len = self.unary()?;
        (0..len).map(|_| self.bit()).collect()
    }
}

fn put_unary(out: &mut BitWord, n: usize) {
    out.extend(std::iter::repeat_n(true, n));
    out.push(false);
}

fn put_fixed(out: &mut BitWord, v: usize, width: usize) {
    for i in (0..width).rev() {
        out.push((v >> i) & 1 == 1);
    }
}

fn put_word(out: &mut BitWord, w: &[bool]) {
    put_unary(out, w.len());
    out.extend_from(w);
}

// ---------------------------------------------------------------------------
// FST codec

pub fn encode_fst(t: &FstMachine) -> BitWord {
    let n = t.num_states();
    let width = ceil_log2(n);
    let mut out = BitWord::new();
    put_unary(&mut out, n);
    for q in 0..n {
        for b in [false, true] {
            put_fixed(&mut out, t.delta(q, b), width);
            put_word(&mut out, t.nu(q, b));
        }
    }
    out
}

/// Decodes a codeword at the start of `bits`; returns the machine and the
/// number of bits consumed.
pub fn decode_fst_prefix(bits: &[bool]) -> Result<(FstMachine, usize), CodecError> {
    let mut r = Reader { bits, pos: 0 };
    let n = r.unary()?;
    if n == 0 {
        return Err(CodecError::NoStates);
    }
    let width = ceil_log2(n);
    let mut next = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row_next = [0; 2];
        let mut row_out = [BitWord::new(), BitWord::new()];
        for b in 0..2 {
            let q = r.fixed(width)?;
            if q >= n {
                return Err(CodecError::BadState(q));
            }
            row_next[b] = q;
            row_out[b] = r.word()?;
        }
        next.push(row_next);
        out.push(row_out);
    }
    let t = FstMachine::new(next, out).map_err(|e| CodecError::Machine(e.to_string()))?;
    Ok((t, r.pos))
}

/// Decodes exactly one codeword.
pub fn decode_fst(bits: &[bool]) -> Result<FstMachine, CodecError> {
    let (t, used) = decode_fst_prefix(bits)?;
    if used != bits.len() {
        return Err(CodecError::Trailing(bits.len() - used));
    }
    Ok(t)
}

/// `|T|_σ`. Every encoding of a machine has the same length, so this is the
/// length of [`encode_fst`].
pub fn sigma_size_fst(t: &FstMachine) -> usize {
    encode_fst(t).len()
}

fn rename_fst(t: &FstMachine, perm: &[State]) -> FstMachine {
    // perm[old] = new
    let n = t.num_states();
    let mut next = vec![[0; 2]; n];
    let mut out = vec![[BitWord::new(), BitWord::new()]; n];
    for q in 0..n {
        for b in [false, true] {
            next[perm[q]][b as usize] = perm[t.delta(q, b)];
            out[perm[q]][b as usize] = t.nu(q, b).clone();
        }
    }
    FstMachine::new(next, out).expect("renaming preserves validity")
}

fn perms_fixing_zero(n: usize) -> impl Iterator<Item = Vec<State>> {
    (1..n).permutations(n.saturating_sub(1)).map(|p| {
        let mut v = vec![0];
        v.extend(p);
        v
    })
}

/// Representative of `t` up to renaming of non-start states: the renaming
/// with the lexicographically least codeword. Cost grows as `(|Q|-1)!`.
pub fn canonical_fst(t: &FstMachine) -> FstMachine {
    perms_fixing_zero(t.num_states())
        .map(|p| rename_fst(t, &p))
        .min_by(|a, b| encode_fst(a).bits().cmp(encode_fst(b).bits()))
        .expect("at least the identity renaming")
}

fn fst_base_size(n: usize) -> usize {
    n + 1 + 2 * n * (ceil_log2(n) + 1)
}

/// Output tuples of `slots` words with total length at most `budget`.
fn output_tuples(slots: usize, budget: usize) -> Vec<Vec<BitWord>> {
    let mut all = vec![Vec::new()];
    for _ in 0..slots {
        let mut next = Vec::new();
        for prefix in &all {
            let used: usize = prefix.iter().map(|w: &BitWord| w.len()).sum();
            for w in crate::fst::words_up_to(budget - used) {
                let mut p = prefix.clone();
                p.push(w);
                next.push(p);
            }
        }
        all = next;
    }
    all
}

/// Every FST with `|T|_σ <= k`, one per renaming class, ordered by size and
/// then by codeword.
pub fn enumerate_fsts(k: usize) -> Result<Vec<FstMachine>, ComplexityError> {
    if k > MAX_FST_K {
        return Err(ComplexityError::BoundTooLarge { k, max: MAX_FST_K });
    }
    let mut found: BTreeMap<(usize, Vec<bool>), FstMachine> = BTreeMap::new();
    let mut n = 1;
    while fst_base_size(n) <= k {
        let budget = (k - fst_base_size(n)) / 2;
        let slots = 2 * n;
        let outs = output_tuples(slots, budget);
        for nexts in (0..slots).map(|_| 0..n).multi_cartesian_product() {
            for o in &outs {
                let next = (0..n).map(|q| [nexts[2 * q], nexts[2 * q + 1]]).collect();
                let out = (0..n).map(|q| [o[2 * q].clone(), o[2 * q + 1].clone()]).collect();
                let t = FstMachine::new(next, out).expect("structurally valid");
                let code = encode_fst(&t);
                let canon = encode_fst(&canonical_fst(&t));
                if code == canon {
                    found.insert((code.len(), code.into_bits()), t);
                }
            }
        }
        n += 1;
    }
    Ok(found.into_values().collect())
}

/// Shortest `y` with `T(y) = x`, by breadth-first search over
/// `(state, output produced)`. Only moves whose output keeps the total a
/// prefix of `x` are followed, so at most `|Q|(|x|+1)` nodes exist and the
/// search always closes.
pub fn fst_min_witness(t: &FstMachine, x: &[bool]) -> Option<BitWord> {
    let n = t.num_states();
    let width = x.len() + 1;
    let idx = |q: State, p: usize| q * width + p;
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; n * width];
    let mut seen = vec![false; n * width];
    let start = idx(t.start(), 0);
    seen[start] = true;
    let mut queue = VecDeque::from([(t.start(), 0usize)]);
    while let Some((q, p)) = queue.pop_front() {
        if p == x.len() {
            let mut y = Vec::new();
            let mut node = idx(q, p);
            while let Some((prev, b)) = parent[node] {
                y.push(b);
                node = prev;
            }
            y.reverse();
            return Some(BitWord::from_bits(y));
        }
        for b in [false, true] {
            let w = t.nu(q, b);
            if p + w.len() <= x.len() && x[p..p + w.len()] == w[..] {
                let (q2, p2) = (t.delta(q, b), p + w.len());
                let node = idx(q2, p2);
                if !seen[node] {
                    seen[node] = true;
                    parent[node] = Some((idx(q, p), b));
                    queue.push_back((q2, p2));
                }
            }
        }
    }
    None
}

/// Hex form of a codeword, zero-padded to whole nibbles.
pub fn to_hex(code: &[bool]) -> String {
    let mut bytes = vec![0u8; code.len().div_ceil(8)];
    for (i, &b) in code.iter().enumerate() {
        if b {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    let mut s = hex::encode(bytes);
    s.truncate(code.len().div_ceil(4));
    s
}

pub fn from_hex(s: &str) -> Result<BitWord, CodecError> {
    let s = s.trim();
    let padded = if s.len() % 2 == 1 { format!("{s}0") } else { s.to_string() };
    let bytes = hex::decode(&padded).map_err(|e| CodecError::Hex(e.to_string()))?;
    let mut bits: Vec<bool> = bytes.iter().flat_map(|&byte| (0..8).map(move |i| byte & (0x80 >> i) != 0)).collect();
    bits.truncate(4 * s.len());
    Ok(BitWord::from_bits(bits))
}

/// Decodes a hex codeword, ignoring the zero padding.
pub fn decode_fst_hex(s: &str) -> Result<FstMachine, CodecError> {
    let bits = from_hex(s)?;
    let (t, used) = decode_fst_prefix(&bits)?;
    check_padding(&bits, used)?;
    Ok(t)
}

fn check_padding(bits: &[bool], used: usize) -> Result<(), CodecError> {
    let rest = &bits[used..];
    if rest.len() >= 4 || rest.iter().any(|&b| b) {
        return Err(CodecError::Trailing(rest.len()));
    }
    Ok(())
}

/// `D^k(x)` over FSTs, exact.
pub fn dk_fst(x: &[bool], k: usize) -> Result<ComplexityResult, ComplexityError> {
    let machines = enumerate_fsts(k)?;
    Ok(dk_fst_over(x, &machines))
}

/// `D^k(x)` over a pre-enumerated machine list.
pub fn dk_fst_over(x: &[bool], machines: &[FstMachine]) -> ComplexityResult {
    let mut best = ComplexityResult::infinite(true);
    for t in machines {
        if let Some(y) = fst_min_witness(t, x) {
            if best.value.is_none_or(|v| y.len() < v) {
                best.value = Some(y.len());
                best.witness = Some((to_hex(&encode_fst(t)), y));
            }
        }
    }
    best
}

/// Limits for [`dk_fst_naive`].
pub const MAX_NAIVE_K: usize = 14;
pub const MAX_NAIVE_LEN: usize = 6;

/// Brute-force `D^k(x)`: decodes every bit string of length at most `k`
/// and tries every input up to `|Q|(|x|+1)` bits. Only for tiny cases.
pub fn dk_fst_naive(x: &[bool], k: usize) -> Result<Option<usize>, ComplexityError> {
    if k > MAX_NAIVE_K {
        return Err(ComplexityError::BoundTooLarge { k, max: MAX_NAIVE_K });
    }
    if x.len() > MAX_NAIVE_LEN {
        return Err(ComplexityError::BoundTooLarge { k: x.len(), max: MAX_NAIVE_LEN });
    }
    let mut best: Option<usize> = None;
    for code in crate::fst::words_up_to(k) {
        let Ok(t) = decode_fst(&code) else { continue };
        let bound = t.num_states() * (x.len() + 1);
        let limit = best.map_or(bound, |b| bound.min(b.saturating_sub(1)));
        for y in crate::fst::words_up_to(limit) {
            if t.run(&y).0.bits() == x {
                best = Some(y.len());
                break;
            }
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// PB codec

fn action_code(a: Action) -> usize {
    match a {
        Action::Right => 0,
        Action::Left => 1,
        Action::Push => 2,
        Action::Pop => 3,
    }
}

pub fn encode_pb(m: &PebbleMachine) -> BitWord {
    let n = m.num_states();
    let width = ceil_log2(n);
    let mut out = BitWord::new();
    put_unary(&mut out, n);
    put_unary(&mut out, m.pebbles());
    for q in 0..n {
        out.push(m.is_final(q));
    }
    for q in (0..n).filter(|&q| !m.is_final(q)) {
        for sym in Symbol::ALL {
            for mask in 0..m.num_masks() {
                match m.get(q, sym, mask) {
                    None => out.push(false),
                    Some(t) => {
                        out.push(true);
                        put_fixed(&mut out, t.next, width);
                        put_fixed(&mut out, action_code(t.action), 2);
                        put_word(&mut out, &t.output);
                    }
                }
            }
        }
    }
    out
}

pub fn decode_pb_prefix(bits: &[bool]) -> Result<(PebbleMachine, usize), CodecError> {
    let mut r = Reader { bits, pos: 0 };
    let n = r.unary()?;
    if n == 0 {
        return Err(CodecError::NoStates);
    }
    let k = r.unary()?;
    let finals: Vec<State> = (0..n).filter_map(|q| r.bit().map(|f| f.then_some(q)).transpose()).collect::<Result<_, _>>()?;
    let mut m = PebbleMachine::new(n, 0, &finals, k).map_err(|e| CodecError::Machine(e.to_string()))?;
    let width = ceil_log2(n);
    for q in (0..n).filter(|q| !finals.contains(q)) {
        for sym in Symbol::ALL {
            for mask in 0..m.num_masks() {
                if !r.bit()? {
                    continue;
                }
                let next = r.fixed(width)?;
                if next >= n {
                    return Err(CodecError::BadState(next));
                }
                let action = Action::ALL[r.fixed(2)?];
                let output = r.word()?;
                m.set(q, sym, mask, Transition::new(next, action, output))
                    .map_err(|e| CodecError::Machine(e.to_string()))?;
            }
        }
    }
    Ok((m, r.pos))
}

pub fn decode_pb(bits: &[bool]) -> Result<PebbleMachine, CodecError> {
    let (m, used) = decode_pb_prefix(bits)?;
    if used != bits.len() {
        return Err(CodecError::Trailing(bits.len() - used));
    }
    Ok(m)
}

pub fn decode_pb_hex(s: &str) -> Result<PebbleMachine, CodecError> {
    let bits = from_hex(s)?;
    let (m, used) = decode_pb_prefix(&bits)?;
    check_padding(&bits, used)?;
    Ok(m)
}

pub fn sigma_size_pb(m: &PebbleMachine) -> usize {
    encode_pb(m).len()
}

fn rename_pb(m: &PebbleMachine, perm: &[State]) -> PebbleMachine {
    let finals: Vec<State> = m.finals().iter().map(|&q| perm[q]).collect();
    let mut r = PebbleMachine::new(m.num_states(), perm[m.start()], &finals, m.pebbles()).expect("same shape");
    for (q, sym, mask, t) in m.transitions() {
        let t2 = Transition::new(perm[t.next], t.action, t.output.clone());
        r.set(perm[q], sym, mask, t2).expect("renaming preserves validity");
    }
    r
}

pub fn canonical_pb(m: &PebbleMachine) -> PebbleMachine {
    perms_fixing_zero(m.num_states())
        .map(|p| rename_pb(m, &p))
        .min_by(|a, b| encode_pb(a).bits().cmp(encode_pb(b).bits()))
        .expect("at least the identity renaming")
}

/// Every PB with `|T|_σ <= k`, one per renaming class, found by decoding
/// every bit string of length at most `k`.
pub fn enumerate_pbs(k: usize) -> Result<Vec<PebbleMachine>, ComplexityError> {
    if k > MAX_PB_K {
        return Err(ComplexityError::BoundTooLarge { k, max: MAX_PB_K });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for len in 0..=k {
        for v in 0u64..(1 << len) {
            let bits: Vec<bool> = (0..len).rev().map(|i| (v >> i) & 1 == 1).collect();
            if let Ok(m) = decode_pb(&bits) {
                let c = canonical_pb(&m);
                if seen.insert(encode_pb(&c)) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

/// One machine offered to [`dk_pb_upper`], with its description size and
/// optionally a known input producing the target.
#[derive(Debug, Clone)]
pub struct PbPoolEntry {
    pub label: String,
    pub machine: PebbleMachine,
    pub sigma: usize,
    pub witness: Option<BitWord>,
}

impl PbPoolEntry {
    pub fn new(label: impl Into<String>, machine: PebbleMachine) -> Self {
        let sigma = sigma_size_pb(&machine);
        PbPoolEntry { label: label.into(), machine, sigma, witness: None }
    }

    pub fn with_witness(mut self, w: BitWord) -> Self {
        self.witness = Some(w);
        self
    }
}

/// Upper bound on PB complexity of `x`: for every pool machine, all inputs
/// of length at most `cap` are tried, plus the supplied witness. Never
/// exact.
pub fn dk_pb_upper(x: &[bool], pool: &[PbPoolEntry], cap: usize) -> ComplexityResult {
    let mut best = ComplexityResult::infinite(false);
    let opts = RunOptions { step_budget: Some(1 << 20), ..RunOptions::default() };
    let produces = |m: &PebbleMachine, y: &[bool]| matches!(pb_run_with(m, y, opts), Ok((o, _)) if o.bits() == x);
    for e in pool {
        let mut cand: Option<BitWord> = None;
        'search: for y in crate::fst::words_up_to(cap) {
            if best.value.is_some_and(|v| y.len() >= v) {
                break 'search;
            }
            if produces(&e.machine, &y) {
                cand = Some(y);
                break;
            }
        }
        if let Some(w) = &e.witness {
            if cand.as_ref().is_none_or(|c| w.len() < c.len()) && produces(&e.machine, w) {
                cand = Some(w.clone());
            }
        }
        if let Some(y) = cand {
            if best.value.is_none_or(|v| y.len() < v) {
                best.value = Some(y.len());
                best.witness = Some((e.label.clone(), y));
            }
        }
    }
    best
}

/// `(min, max)` of the last `tail` ratios: finite stand-ins for the lower and
/// upper randomness densities.
pub fn density_curves(values: &[f64], tail: usize) -> Result<(f64, f64), ComplexityError> {
    if values.len() < 2 {
        return Err(ComplexityError::TooFewPoints(values.len()));
    }
    let window = &values[values.len() - tail.clamp(1, values.len())..];
    let lo = window.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_agrees_on_small_words() {
        for x in [bw(""), bw("0"), bw("0110"), bw("111111")] {
            for k in [8, 12] {
                assert_eq!(dk_fst_naive(&x, k).unwrap(), dk_fst(&x, k).unwrap().value, "x={x} k={k}");
            }
        }
        assert!(dk_fst_naive(&bw("0"), MAX_NAIVE_K + 1).is_err());
    }
    use crate::words::bw;

    #[test]
    fn identity_size() {
        let id = FstMachine::identity();
        assert_eq!(encode_fst(&id), bw("10100101"));
        assert_eq!(sigma_size_fst(&id), 8);
        assert_eq!(decode_fst(&encode_fst(&id)).unwrap(), id);
    }

    #[test]
    fn unreachable_state_costs_bits() {
        let id = FstMachine::identity();
        let bigger = FstMachine::new(
            vec![[0, 0], [1, 1]],
            vec![[bw("0"), bw("1")], [bw(""), bw("")]],
        )
        .unwrap();
        assert!(sigma_size_fst(&bigger) > sigma_size_fst(&id));
    }

    #[test]
    fn enumeration_counts() {
        assert!(enumerate_fsts(3).unwrap().is_empty());
        assert_eq!(enumerate_fsts(4).unwrap().len(), 1);
        let at8 = enumerate_fsts(8).unwrap();
        assert!(at8.contains(&FstMachine::identity()));
        assert_eq!(enumerate_fsts(10).unwrap().len(), 49);
        assert!(matches!(enumerate_fsts(25), Err(ComplexityError::BoundTooLarge { .. })));
    }

    #[test]
    fn dk_examples() {
        // 0 -> 00 fits in 2 + 2·(1+2·|w|) with |w0|+|w1| = 2
        let r = dk_fst(&bw("0000"), 10).unwrap();
        assert_eq!(r.value, Some(2));
        assert!(r.exact);
        assert_eq!(dk_fst(&bw(""), 8).unwrap().value, Some(0));
        assert_eq!(dk_fst(&bw("0110"), 7).unwrap().value, None);
        assert_eq!(dk_fst(&bw("0110"), 8).unwrap().value, Some(4));
    }

    #[test]
    fn hex_roundtrip() {
        let code = encode_fst(&FstMachine::doubler());
        let h = to_hex(&code);
        assert_eq!(decode_fst_hex(&h).unwrap(), FstMachine::doubler());
        assert_eq!(from_hex("a").unwrap(), bw("1010"));
    }

    #[test]
    fn pb_codec_roundtrip() {
        let m = PebbleMachine::identity();
        assert_eq!(decode_pb(&encode_pb(&m)).unwrap(), m);
        let t = crate::constructions::build_t_pref();
        assert_eq!(decode_pb_hex(&to_hex(&encode_pb(&t))).unwrap(), t);
    }

    #[test]
    fn pb_enumeration_small() {
        let ms = enumerate_pbs(6).unwrap();
        assert!(!ms.is_empty());
        assert!(ms.iter().all(|m| sigma_size_pb(m) <= 6));
        assert!(matches!(enumerate_pbs(19), Err(ComplexityError::BoundTooLarge { .. })));
    }

    #[test]
    fn pb_upper_examples() {
        let x = bw("011");
        let pool = vec![PbPoolEntry::new("identity", PebbleMachine::identity())];
        assert_eq!(dk_pb_upper(&x, &pool, 6).value, Some(3));
        assert_eq!(dk_pb_upper(&x, &[], 6).value, None);
        let w = crate::constructions::witness_pref(&x, &bw(""));
        let pool = vec![PbPoolEntry::new("pref", crate::constructions::build_t_pref()).with_witness(w.input)];
        let r = dk_pb_upper(&w.expected_output, &pool, 0);
        assert_eq!(r.value, Some(2 * x.len() + 2));
        assert!(!r.exact);
    }

    #[test]
    fn density_examples() {
        assert_eq!(density_curves(&[1.0, 1.0], 3).unwrap(), (1.0, 1.0));
        assert_eq!(density_curves(&[0.9, 0.6, 0.55, 0.52], 3).unwrap(), (0.52, 0.6));
        assert!(density_curves(&[0.5], 3).is_err());
    }
}
