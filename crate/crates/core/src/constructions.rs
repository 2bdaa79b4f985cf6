//! The explicit machines: a prefix printer, a flag-driven print-and-reverse
//! transducer, a counting pushdown compressor and a square printer, plus
//! builders for inputs that make them print sequence prefixes.
//!
//! Transitions not listed for a machine lead to one absorbing non-final
//! state, so every listed machine is deterministic and total.

use thiserror::Error;

use crate::fst::FstMachine;
use crate::pebble::{Action, PebbleMachine, State, Symbol, Transition};
use crate::pushdown::{Input, PdcMachine, PdcRule, StackSym};
use crate::sequences::{Remark1Sequence, Thm4Params, Thm4Sequence};
use crate::words::{double, pref, reverse, BitStreamSource, BitWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("flag parameter k = {0} outside 3..=5")]
    FlagParam(usize),
    #[error("parameter k must be at least 1")]
    ZeroK,
    #[error("parameter v must be at least 1")]
    ZeroV,
    #[error("requested {requested} bits but the construction only covers {available}")]
    OutOfRange { requested: usize, available: usize },
    #[error("sequence error: {0}")]
    Sequence(#[from] crate::sequences::SeqError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MachineTag {
    Pref,
    PrintReverse(usize),
    PowPrint,
}

/// An input together with the output its machine produces on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessString {
    pub input: BitWord,
    pub expected_output: BitWord,
    pub machine: MachineTag,
}

fn out(b: bool) -> BitWord {
    BitWord::from_bits(vec![b])
}

const BITS: [bool; 2] = [false, true];

// ---------------------------------------------------------------------------
// Prefix printer

mod tp {
    pub const S: usize = 0;
    pub const P: usize = 1;
    pub const B0: usize = 2;
    pub const B1: usize = 3;
    pub const L: usize = 4;
    pub const Q1: usize = 5;
    pub const Q2: usize = 6;
    pub const Q3: usize = 7;
    pub const I: usize = 8;
    pub const F: usize = 9;
}

/// One-pebble machine mapping `d(x)·01·z` to `pref(x)·z`.
pub fn build_t_pref() -> PebbleMachine {
    use tp::*;
    let mut m = PebbleMachine::new(10, S, &[F], 1).expect("valid shape");
    let mut set = |q, sym, mask, t| m.set(q, sym, mask, t).expect("valid transition");
    set(S, Symbol::LeftEnd, 0, Transition::silent(P, Action::Right));
    for b in BITS {
        let qb = if b { B1 } else { B0 };
        set(P, Symbol::bit(b), 0, Transition::silent(qb, Action::Right));
        for a in BITS {
            let t = if a == b { Transition::silent(L, Action::Push) } else { Transition::silent(I, Action::Right) };
            set(qb, Symbol::bit(a), 0, t);
        }
        for c in 0..2 {
            set(L, Symbol::bit(b), c, Transition::silent(L, Action::Left));
        }
        set(Q1, Symbol::bit(b), 0, Transition::silent(Q2, Action::Right));
        set(Q2, Symbol::bit(b), 0, Transition::new(Q1, Action::Right, out(b)));
        set(Q2, Symbol::bit(b), 1, Transition::new(Q3, Action::Pop, out(b)));
        set(Q3, Symbol::bit(b), 0, Transition::silent(P, Action::Right));
        set(I, Symbol::bit(b), 0, Transition::new(I, Action::Right, out(b)));
    }
    set(L, Symbol::LeftEnd, 0, Transition::silent(Q1, Action::Right));
    for q in [P, B0, B1, I] {
        set(q, Symbol::RightEnd, 0, Transition::silent(F, Action::Left));
    }
    m.complete_with_sink();
    m
}

/// `(d(x)·01·z, pref(x)·z)`.
pub fn witness_pref(x: &[bool], z: &[bool]) -> WitnessString {
    let mut input = double(x);
    input.extend_from(&[false, true]);
    input.extend_from(z);
    let mut expected = pref(x);
    expected.extend_from(z);
    WitnessString { input, expected_output: expected, machine: MachineTag::Pref }
}

// ---------------------------------------------------------------------------
// Print-and-reverse transducer

/// State layout of the print-and-reverse machine for flag parameter `k`:
/// six plain states followed by three banks of `4^k` register states.
#[derive(Debug, Clone, Copy)]
pub struct PrintReverseStates {
    pub k: usize,
}

impl PrintReverseStates {
    pub const START: State = 0;
    pub const CHECK: State = 1;
    pub const PLACE: State = 2;
    pub const FLAG_LEFT: State = 3;
    pub const PRINT_LEFT: State = 4;
    pub const FINAL: State = 5;

    fn bank(&self) -> usize {
        1 << (2 * self.k)
    }

    pub fn print(&self, w: usize) -> State {
        6 + w
    }

    pub fn right(&self, w: usize) -> State {
        6 + self.bank() + w
    }

    pub fn scan(&self, w: usize) -> State {
        6 + 2 * self.bank() + w
    }

    pub fn count(&self) -> usize {
        6 + 3 * self.bank()
    }
}

/// One-pebble machine that prints zones verbatim and, for zones introduced
/// by `0`, also prints the part before the closing `1^{2k}0` flag in
/// reverse. Register states remember the last `2k` bits read.
pub fn build_t_printreverse(k: usize) -> Result<PebbleMachine, ConstructionError> {
    if !(3..=5).contains(&k) {
        return Err(ConstructionError::FlagParam(k));
    }
    let st = PrintReverseStates { k };
    let bank = st.bank();
    let ones = bank - 1;
    let shift = |w: usize, b: bool| ((w << 1) | b as usize) & ones;
    let mut m = PebbleMachine::new(st.count(), PrintReverseStates::START, &[PrintReverseStates::FINAL], 1)
        .expect("valid shape");
    let mut set = |q, sym, mask, t| m.set(q, sym, mask, t).expect("valid transition");
    use PrintReverseStates as P;
    set(P::START, Symbol::LeftEnd, 0, Transition::silent(st.print(0), Action::Right));
    for w in 0..bank {
        for b in BITS {
            let closing = w == ones && !b;
            // just printing
            let t = if closing {
                Transition::silent(P::CHECK, Action::Right)
            } else {
                Transition::new(st.print(shift(w, b)), Action::Right, out(b))
            };
            set(st.print(w), Symbol::bit(b), 0, t);
            // printing right before the reverse
            for c in 0..2 {
                let t = if closing {
                    Transition::silent(P::FLAG_LEFT, Action::Left)
                } else {
                    Transition::new(st.right(shift(w, b)), Action::Right, out(b))
                };
                set(st.right(w), Symbol::bit(b), c, t);
            }
            // scanning right silently
            let t = if closing {
                Transition::silent(P::CHECK, Action::Right)
            } else {
                Transition::silent(st.scan(shift(w, b)), Action::Right)
            };
            set(st.scan(w), Symbol::bit(b), 0, t);
        }
        set(st.print(w), Symbol::RightEnd, 0, Transition::silent(P::FINAL, Action::Left));
    }
    set(P::CHECK, Symbol::Zero, 0, Transition::silent(P::PLACE, Action::Right));
    set(P::CHECK, Symbol::One, 0, Transition::silent(st.print(0), Action::Right));
    set(P::CHECK, Symbol::RightEnd, 0, Transition::silent(P::FINAL, Action::Left));
    for b in BITS {
        set(P::PLACE, Symbol::bit(b), 0, Transition::silent(st.right(0), Action::Push));
        for c in 0..2 {
            let t = if c == 0 {
                Transition::new(P::PRINT_LEFT, Action::Left, out(b))
            } else {
                Transition::new(st.scan(0), Action::Pop, out(b))
            };
            set(P::PRINT_LEFT, Symbol::bit(b), c, t);
        }
    }
    set(P::FLAG_LEFT, Symbol::One, 0, Transition::silent(P::FLAG_LEFT, Action::Left));
    set(P::FLAG_LEFT, Symbol::Zero, 0, Transition::new(P::PRINT_LEFT, Action::Left, out(false)));
    m.complete_with_sink();
    Ok(m)
}

/// Simulates the register of the printing states and inserts `01` before
/// any `0` that would otherwise close a flag, so that `text` is printed
/// verbatim from a freshly reset register.
fn escape_print(text: &[bool], k: usize, out: &mut BitWord) {
    let mut run = 0usize;
    for &b in text {
        if b {
            out.push(true);
            run += 1;
        } else {
            if run >= 2 * k {
                out.extend_from(&[false, true]);
            }
            out.push(false);
            run = 0;
        }
    }
}

fn trailing_ones(x: &[bool]) -> usize {
    x.iter().rev().take_while(|&&b| b).count()
}

/// A piece of the target sequence and how the print-and-reverse machine
/// produces it starting from its zone-check state.
struct Unit {
    output: BitWord,
    // Some(x_text ++ flag) when produced through the reversal mechanism
    reversal: Option<BitWord>,
}

fn thm4_units(seq: &Thm4Sequence, n_stages_through: usize) -> (BitWord, Vec<Unit>) {
    let p = seq.params();
    let prelude = crate::sequences::thm4_prelude(p);
    let mut units = Vec::new();
    for st in seq.stages_through(n_stages_through) {
        let mut a = st.palindrome_text();
        a.extend(std::iter::repeat_n(true, st.flag));
        units.push(Unit { output: a, reversal: None });
        for z in &st.zones {
            let ok = !z.is_empty() && !z.xs.last().expect("nonempty")[st.m - 1];
            let reversal = ok.then(|| {
                let mut r = z.x_text();
                r.extend(std::iter::repeat_n(true, z.flag));
                r
            });
            units.push(Unit { output: z.text(), reversal });
        }
    }
    (prelude, units)
}

/// Input groups as `(input, output)`. Each closed group leaves the machine
/// in its zone-check state. Plain units are merged until the printed text
/// ends with a run of at least `2k` ones; only the final group may stay
/// open, in which case it has no closing `0`.
fn thm4_groups(k: usize, units: &[Unit]) -> Vec<(BitWord, BitWord)> {
    let mut groups = Vec::new();
    let mut i = 0;
    while i < units.len() {
        if let Some(r) = &units[i].reversal {
            let mut input = BitWord::from_bits(vec![false]);
            input.extend_from(r);
            input.push(false);
            groups.push((input, units[i].output.clone()));
            i += 1;
            continue;
        }
        let mut text = BitWord::new();
        while i < units.len() {
            text.extend_from(&units[i].output);
            i += 1;
            if trailing_ones(&text) >= 2 * k {
                break;
            }
        }
        let mut input = BitWord::from_bits(vec![true]);
        escape_print(&text, k, &mut input);
        if trailing_ones(&text) >= 2 * k {
            input.push(false);
        }
        groups.push((input, text));
    }
    groups
}

/// Input printing `S_1 … S_{k-1} 1^k … 1^{2k-1} S_k … S_n` on the
/// print-and-reverse machine with flag parameter `k`.
pub fn witness_thm4(k: usize, v: usize, n: usize) -> Result<WitnessString, ConstructionError> {
    let seq = Thm4Sequence::new(Thm4Params::new(k, v)?);
    let (prelude, units) = thm4_units(&seq, n);
    let mut input = prelude.clone();
    input.push(false);
    let mut expected = prelude;
    for (i, o) in thm4_groups(k, &units) {
        input.extend_from(&i);
        expected.extend_from(&o);
    }
    Ok(WitnessString { input, expected_output: expected, machine: MachineTag::PrintReverse(k) })
}

/// Input printing exactly `S ↾ len`. Whole groups are used while they fit
/// and the remainder is printed verbatim.
pub fn witness_thm4_prefix(k: usize, v: usize, len: usize) -> Result<WitnessString, ConstructionError> {
    let seq = Thm4Sequence::new(Thm4Params::new(k, v)?);
    let (prelude, stages) = seq.stages_covering(len);
    let target = seq.prefix(len);
    let tag = MachineTag::PrintReverse(k);
    if len <= prelude.len() {
        let mut input = BitWord::new();
        escape_print(&prelude[..len], k, &mut input);
        if len == prelude.len() {
            input.push(false);
        }
        return Ok(WitnessString { input, expected_output: target, machine: tag });
    }
    let last = stages.last().map_or(k - 1, |s| s.m);
    let (_, units) = thm4_units(&seq, last);
    let mut input = prelude.clone();
    input.push(false);
    let mut produced = prelude.len();
    for (gi, go) in thm4_groups(k, &units) {
        if produced + go.len() <= len {
            input.extend_from(&gi);
            produced += go.len();
        } else {
            input.push(true);
            escape_print(&go[..len - produced], k, &mut input);
            produced = len;
        }
        if produced == len {
            break;
        }
    }
    debug_assert_eq!(produced, len);
    Ok(WitnessString { input, expected_output: target, machine: tag })
}

/// `|witness_thm4_prefix(k, v, len).input|`.
pub fn thm4_witness_len(k: usize, v: usize, len: usize) -> Result<usize, ConstructionError> {
    witness_thm4_prefix(k, v, len).map(|w| w.input.len())
}

// ---------------------------------------------------------------------------
// Counting pushdown compressor

/// State indices of the counting compressor `C′(m, k, v)`.
#[derive(Debug, Clone, Copy)]
pub struct CprimeStates {
    pub m: usize,
    pub k: usize,
    pub v: usize,
}

impl CprimeStates {
    /// `q^s_i`, `0 <= i <= m`.
    pub fn count(&self, i: usize) -> State {
        i
    }
    pub fn q0(&self) -> State {
        self.m + 1
    }
    /// `q^{f1}_i`, `1 <= i <= k`.
    pub fn f1(&self, i: usize) -> State {
        self.m + 1 + i
    }
    /// `q^{f0}_i`, `1 <= i <= k`.
    pub fn f0(&self, i: usize) -> State {
        self.m + 1 + self.k + i
    }
    /// `q^F_i`, `0 <= i <= k`.
    pub fn pop(&self, i: usize) -> State {
        self.m + 2 + 2 * self.k + i
    }
    /// `q^c_i`, `1 <= i <= v+1`.
    pub fn check(&self, i: usize) -> State {
        self.m + 2 + 3 * self.k + i
    }
    pub fn error(&self) -> State {
        self.m + 4 + 3 * self.k + self.v
    }
    pub fn total(&self) -> usize {
        self.m + 5 + 3 * self.k + self.v
    }
}

/// The counting compressor: copies the first `m` bits, then copies input in
/// groups of `k` while pushing it, and after a group `1^k` pops the flag and
/// checks the following input against the stack, emitting one `0` per `v`
/// matched bits. A mismatch emits `1^{3m+i}0` and the offending bit, after
/// which all input is copied.
pub fn build_cprime(m: usize, k: usize, v: usize) -> Result<PdcMachine, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::ZeroK);
    }
    if v == 0 {
        return Err(ConstructionError::ZeroV);
    }
    let s = CprimeStates { m, k, v };
    let mut pd = PdcMachine::new(s.total(), s.count(0), k + 2, false).expect("valid shape");
    let mut set = |q, a, y, r| pd.set(q, a, y, r).expect("valid rule");
    let keep = |y: StackSym| vec![y];
    let bit = |b: bool| BitWord::from_bits(vec![b]);
    for y in StackSym::ALL {
        for i in 0..m {
            for b in BITS {
                set(s.count(i), Input::Bit(b), y, PdcRule::new(s.count(i + 1), keep(y), bit(b)));
            }
        }
        set(s.count(m), Input::Lambda, y, PdcRule::new(s.q0(), keep(y), BitWord::new()));
        for b in BITS {
            let push = vec![StackSym::bit(b), y];
            let first = if b { s.f1(1) } else { s.f0(1) };
            set(s.q0(), Input::Bit(b), y, PdcRule::new(first, push.clone(), bit(b)));
            for i in 1..k {
                set(s.f0(i), Input::Bit(b), y, PdcRule::new(s.f0(i + 1), push.clone(), bit(b)));
                let next = if b { s.f1(i + 1) } else { s.f0(i + 1) };
                set(s.f1(i), Input::Bit(b), y, PdcRule::new(next, push.clone(), bit(b)));
            }
            set(s.error(), Input::Bit(b), y, PdcRule::new(s.error(), keep(y), bit(b)));
        }
        set(s.f0(k), Input::Lambda, y, PdcRule::new(s.q0(), keep(y), BitWord::new()));
        set(s.f1(k), Input::Lambda, y, PdcRule::new(s.pop(0), keep(y), BitWord::new()));
        if y != StackSym::Bottom {
            for i in 0..k {
                set(s.pop(i), Input::Lambda, y, PdcRule::new(s.pop(i + 1), vec![], BitWord::new()));
            }
        }
        set(s.pop(k), Input::Lambda, y, PdcRule::new(s.check(1), keep(y), BitWord::new()));
        set(s.check(v + 1), Input::Lambda, y, PdcRule::new(s.check(1), keep(y), BitWord::new()));
        for i in 1..=v {
            for b in BITS {
                let rule = if y == StackSym::Bottom {
                    let first = if b { s.f1(1) } else { s.f0(1) };
                    PdcRule::new(first, vec![StackSym::bit(b), StackSym::Bottom], bit(b))
                } else if StackSym::bit(b) == y {
                    let o = if i == v { bit(false) } else { BitWord::new() };
                    PdcRule::new(s.check(i + 1), vec![], o)
                } else {
                    let mut o = BitWord::ones(3 * m + i);
                    o.push(false);
                    o.push(b);
                    PdcRule::new(s.error(), keep(y), o)
                };
                set(s.check(i), Input::Bit(b), y, rule);
            }
        }
    }
    Ok(pd)
}

/// `|R|^2 + k + |R|^2 / v`: output of the counting compressor on one block
/// `R^{|R|} 1^k (R^{-1})^{|R|}` read in the flag-checking state.
pub fn cprime_block_output_len(r_len: usize, k: usize, v: usize) -> usize {
    r_len * r_len + k + r_len * r_len / v
}

// ---------------------------------------------------------------------------
// Square printer

/// State indices of the square printer.
pub mod pp {
    pub const S: usize = 0;
    pub const ACCEPT: usize = 1;
    pub const DEAD: usize = 2;
    pub const SI: usize = 3;
    pub const S0: usize = 4;
    pub const S1: usize = 5;
    pub const P: usize = 6;
    pub const P0: usize = 7;
    pub const P1: usize = 8;
    pub const R: usize = 9;
    pub const R0: usize = 10;
    pub const R1: usize = 11;
    pub const L: usize = 12;
    pub const L0: usize = 13;
    pub const L1: usize = 14;
    pub const IM: usize = 15;
    pub const I: usize = 16;
    pub const I0: usize = 17;
    pub const I1: usize = 18;
    pub const F: usize = 19;
    pub const FP: usize = 20;
    pub const COUNT: usize = 21;
}

/// One-pebble machine reading its input in pairs. After the pair `10` it
/// prints `x^{|x|}` for the following `d(x)`; after `01` it prints `x`.
/// It accepts at `⊢` only inside a `01` zone.
pub fn build_t_powprint() -> PebbleMachine {
    use pp::*;
    let mut m = PebbleMachine::new(COUNT, S, &[ACCEPT], 1).expect("valid shape");
    let go = Transition::silent;
    let sb = |b: bool, zero: State, one: State| if b { one } else { zero };
    {
        let mut all = |q, sym, t: Transition| m.set_all_masks(q, sym, t).expect("valid transition");
        all(S, Symbol::LeftEnd, go(SI, Action::Right));
        all(SI, Symbol::LeftEnd, go(DEAD, Action::Right));
        all(SI, Symbol::RightEnd, go(DEAD, Action::Left));
        all(P, Symbol::RightEnd, go(ACCEPT, Action::Left));
        all(I, Symbol::RightEnd, go(DEAD, Action::Left));
        all(DEAD, Symbol::RightEnd, go(DEAD, Action::Left));
        for b in BITS {
            // opening flag
            all(SI, Symbol::bit(b), go(sb(b, S0, S1), Action::Right));
            let qs = sb(b, S0, S1);
            all(qs, Symbol::RightEnd, go(DEAD, Action::Left));
            // just print
            all(P, Symbol::bit(b), go(sb(b, P0, P1), Action::Right));
            let qp = sb(b, P0, P1);
            all(qp, Symbol::RightEnd, go(ACCEPT, Action::Left));
            // scan left for the opening 10
            all(L, Symbol::bit(b), go(sb(b, L0, L1), Action::Left));
            let ql = sb(b, L0, L1);
            all(ql, Symbol::LeftEnd, go(DEAD, Action::Right));
            // print one copy
            all(IM, Symbol::bit(b), go(I, Action::Right));
            all(I, Symbol::bit(b), go(sb(b, I0, I1), Action::Right));
            let qi = sb(b, I0, I1);
            all(qi, Symbol::RightEnd, go(DEAD, Action::Left));
            all(FP, Symbol::bit(b), go(R, Action::Right));
            all(DEAD, Symbol::bit(b), go(DEAD, Action::Right));
            for b2 in BITS {
                let flag = |same: Transition| match (b, b2) {
                    (false, true) => go(P, Action::Right),
                    (true, false) => go(R, Action::Right),
                    _ => same,
                };
                all(qs, Symbol::bit(b2), flag(go(DEAD, Action::Left)));
                all(qp, Symbol::bit(b2), flag(Transition::new(P, Action::Right, out(b))));
                let t = match (b2, b) {
                    _ if b == b2 => go(L, Action::Left),
                    (true, false) => go(IM, Action::Right),
                    _ => go(DEAD, Action::Right),
                };
                all(ql, Symbol::bit(b2), t);
                let t = if b == b2 { Transition::new(I, Action::Right, out(b)) } else { go(F, Action::Left) };
                all(qi, Symbol::bit(b2), t);
            }
        }
    }
    let mut one = |q, sym, mask, t: Transition| m.set(q, sym, mask, t).expect("valid transition");
    one(R, Symbol::RightEnd, 0, go(DEAD, Action::Left));
    for b in BITS {
        one(R, Symbol::bit(b), 0, go(sb(b, R0, R1), Action::Right));
        let qr = sb(b, R0, R1);
        one(qr, Symbol::RightEnd, 0, go(DEAD, Action::Left));
        for b2 in BITS {
            let t = match (b, b2) {
                (true, false) => go(R, Action::Right),
                (false, true) => go(P, Action::Right),
                _ => go(L, Action::Push),
            };
            one(qr, Symbol::bit(b2), 0, t);
        }
        one(F, Symbol::bit(b), 0, go(F, Action::Left));
        one(F, Symbol::bit(b), 1, go(FP, Action::Pop));
    }
    one(F, Symbol::LeftEnd, 0, go(DEAD, Action::Right));
    m.complete_with_sink();
    m
}

/// `x_i = 10·d(R_i)·01·d(1^k)·10·d(R_i^{-1})` for each block, followed by
/// `01·d(y)` for a partial block `y`; a partial block covering all of
/// `R^{|R|}` uses `10·d(R)·01·d(rest)` instead.
pub fn witness_remark1(k: usize, blocks: &[BitWord], len: usize) -> Result<WitnessString, ConstructionError> {
    let mut input = BitWord::new();
    let mut expected = BitWord::new();
    let flag_10 = [true, false];
    let flag_01 = [false, true];
    let ones = BitWord::ones(k);
    let mut needs_close = true;
    for r in blocks {
        let block = crate::sequences::remark1_block(r, k);
        let rr = reverse(r);
        if expected.len() + block.len() <= len {
            input.extend_from(&flag_10);
            input.extend_from(&double(r));
            input.extend_from(&flag_01);
            input.extend_from(&double(&ones));
            input.extend_from(&flag_10);
            input.extend_from(&double(&rr));
            expected.extend_from(&block);
            if expected.len() == len {
                break;
            }
            continue;
        }
        let y = &block[..len - expected.len()];
        let sq = r.len() * r.len();
        if !r.is_empty() && y.len() >= sq {
            input.extend_from(&flag_10);
            input.extend_from(&double(r));
            input.extend_from(&flag_01);
            input.extend_from(&double(&y[sq..]));
        } else {
            input.extend_from(&flag_01);
            input.extend_from(&double(y));
        }
        expected.extend_from(y);
        needs_close = false;
        break;
    }
    if expected.len() < len {
        return Err(ConstructionError::OutOfRange { requested: len, available: expected.len() });
    }
    if needs_close {
        input.extend_from(&flag_01);
    }
    Ok(WitnessString { input, expected_output: expected, machine: MachineTag::PowPrint })
}

/// Witness for `S ↾ len` of a repeated-block sequence.
pub fn witness_remark1_prefix(seq: &Remark1Sequence, len: usize) -> Result<WitnessString, ConstructionError> {
    let j = seq.blocks_covering(len);
    witness_remark1(seq.params().k, &seq.blocks(j), len)
}

// ---------------------------------------------------------------------------
// Adapters

/// The pebble-free two-way machine that simulates an FST in one pass.
pub fn fst_as_pebble(t: &FstMachine) -> PebbleMachine {
    let n = t.num_states();
    let start = n;
    let fin = n + 1;
    let mut m = PebbleMachine::new(n + 2, start, &[fin], 0).expect("valid shape");
    m.set(start, Symbol::LeftEnd, 0, Transition::silent(0, Action::Right)).expect("valid");
    for q in 0..n {
        for b in BITS {
            m.set(q, Symbol::bit(b), 0, Transition::new(t.delta(q, b), Action::Right, t.nu(q, b).clone()))
                .expect("valid");
        }
        m.set(q, Symbol::RightEnd, 0, Transition::silent(fin, Action::Left)).expect("valid");
    }
    m
}
