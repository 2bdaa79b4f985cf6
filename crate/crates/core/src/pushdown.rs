//! Bounded pushdown compressors.
//!
//! A rule `δ(q, a, y) = (q', v)` reads input `a ∈ {0, 1, λ}` with `y` on top
//! of the stack and replaces `y` by the word `v` (written top first). λ-rules
//! are taken whenever defined; at most `c` may follow each consumed bit,
//! and the run performs one λ-closure before the first bit and after every
//! bit, including the last.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::words::BitWord;

pub type State = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StackSym {
    Zero,
    One,
    Bottom,
}

impl StackSym {
    pub const ALL: [StackSym; 3] = [StackSym::Zero, StackSym::One, StackSym::Bottom];

    fn index(self) -> usize {
        match self {
            StackSym::Zero => 0,
            StackSym::One => 1,
            StackSym::Bottom => 2,
        }
    }

    pub fn bit(b: bool) -> StackSym {
        if b {
            StackSym::One
        } else {
            StackSym::Zero
        }
    }

    pub fn as_char(self) -> char {
        match self {
            StackSym::Zero => '0',
            StackSym::One => '1',
            StackSym::Bottom => 'Z',
        }
    }
}

/// Input side of a rule: a bit, or λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Input {
    Bit(bool),
    Lambda,
}

impl Input {
    fn index(self) -> usize {
        match self {
            Input::Bit(false) => 0,
            Input::Bit(true) => 1,
            Input::Lambda => 2,
        }
    }

    const ALL: [Input; 3] = [Input::Bit(false), Input::Bit(true), Input::Lambda];
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::Bit(b) => write!(f, "{}", *b as u8),
            Input::Lambda => f.write_str("~"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PdcRule {
    pub next: State,
    /// Replacement for the top symbol, top first.
    pub push: Vec<StackSym>,
    pub output: BitWord,
}

impl PdcRule {
    pub fn new(next: State, push: Vec<StackSym>, output: BitWord) -> Self {
        PdcRule { next, push, output }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdcError {
    #[error("machine has no states")]
    NoStates,
    #[error("state {0} out of range")]
    BadState(State),
    #[error("state {state}: λ-rule and bit rule both defined on top {top:?}")]
    Nondeterministic { state: State, top: StackSym },
    #[error("state {state} on {input}: rule on z0 must rewrite to a word ending in z0")]
    BottomPopped { state: State, input: Input },
    #[error("state {state} on {input}: z0 written above the bottom of the stack")]
    BottomMisplaced { state: State, input: Input },
    #[error("state {state} on {input}: unary machine uses stack symbol 1")]
    NotUnary { state: State, input: Input },
    #[error("λ-transitions can cycle through state {0}")]
    LambdaCycle(State),
    #[error("{len} consecutive λ-transitions possible from state {state}, budget is {budget}")]
    LambdaChainTooLong { state: State, len: usize, budget: usize },
    #[error("more than {0} λ-transitions in succession")]
    LambdaBudgetExceeded(usize),
    #[error("no rule for state {state} on {input} with top {top:?}")]
    Stuck { state: State, input: Input, top: StackSym },
    #[error("length bound {0} exceeds the supported maximum of {1}")]
    BoundTooLarge(usize, usize),
    #[error("height {height} below the required (c+1)|x| = {required}")]
    HeightTooSmall { height: usize, required: usize },
    #[error("machine is not unary")]
    RequiresUnary,
    #[error("no input of length <= {0} produces the requested output and end state")]
    NoPreimage(usize),
    #[error("inputs {0} and {1} both produce the requested output and end state")]
    Ambiguous(BitWord, BitWord),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdcMachine {
    num_states: usize,
    start: State,
    unary: bool,
    lambda_budget: usize,
    table: Vec<Option<PdcRule>>,
}

impl PdcMachine {
    pub fn new(num_states: usize, start: State, lambda_budget: usize, unary: bool) -> Result<Self, PdcError> {
        if num_states == 0 {
            return Err(PdcError::NoStates);
        }
        if start >= num_states {
            return Err(PdcError::BadState(start));
        }
        Ok(PdcMachine { num_states, start, unary, lambda_budget, table: vec![None; num_states * 9] })
    }

    fn slot(q: State, a: Input, y: StackSym) -> usize {
        q * 9 + a.index() * 3 + y.index()
    }

    pub fn set(&mut self, q: State, a: Input, y: StackSym, rule: PdcRule) -> Result<(), PdcError> {
        if q >= self.num_states {
            return Err(PdcError::BadState(q));
        }
        if rule.next >= self.num_states {
            return Err(PdcError::BadState(rule.next));
        }
        self.table[Self::slot(q, a, y)] = Some(rule);
        Ok(())
    }

    pub fn get(&self, q: State, a: Input, y: StackSym) -> Option<&PdcRule> {
        self.table[Self::slot(q, a, y)].as_ref()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn is_unary(&self) -> bool {
        self.unary
    }

    pub fn lambda_budget(&self) -> usize {
        self.lambda_budget
    }

    pub fn stack_alphabet(&self) -> &'static [StackSym] {
        if self.unary {
            &[StackSym::Zero, StackSym::Bottom]
        } else {
            &StackSym::ALL
        }
    }

    /// Every defined rule as `(state, input, top, rule)`.
    pub fn rules(&self) -> impl Iterator<Item = (State, Input, StackSym, &PdcRule)> {
        self.table.iter().enumerate().filter_map(|(slot, r)| {
            let r = r.as_ref()?;
            Some((slot / 9, Input::ALL[(slot % 9) / 3], StackSym::ALL[slot % 3], r))
        })
    }

    /// Identity compressor: copies its input and never touches the stack.
    pub fn identity(unary: bool) -> Self {
        let mut m = PdcMachine::new(1, 0, 0, unary).expect("valid");
        for &y in m.stack_alphabet() {
            for b in [false, true] {
                m.set(0, Input::Bit(b), y, PdcRule::new(0, vec![y], BitWord::from_bits(vec![b])))
                    .unwrap();
            }
        }
        m
    }

    /// Encodes bit pairs with the prefix code `00→0, 01→100, 10→101, 11→11`.
    pub fn pair_code(unary: bool) -> Self {
        let mut m = PdcMachine::new(3, 0, 0, unary).expect("valid");
        let code = |a: bool, b: bool| -> BitWord {
            match (a, b) {
                (false, false) => "0",
                (false, true) => "100",
                (true, false) => "101",
                (true, true) => "11",
            }
            .parse()
            .unwrap()
        };
        for &y in m.stack_alphabet() {
            for a in [false, true] {
                m.set(0, Input::Bit(a), y, PdcRule::new(1 + a as usize, vec![y], BitWord::new())).unwrap();
                for b in [false, true] {
                    m.set(1 + a as usize, Input::Bit(b), y, PdcRule::new(0, vec![y], code(a, b))).unwrap();
                }
            }
        }
        m
    }

    /// Checks determinism, the bottom-of-stack discipline, unarity, and that
    /// no reachable `(state, top)` admits a λ-cycle or more than `c`
    /// consecutive λ-transitions. Reports every violation found.
    pub fn validate(&self) -> Result<(), Vec<PdcError>> {
        let mut errs = Vec::new();
        for (q, a, y, r) in self.rules() {
            if a != Input::Lambda && self.get(q, Input::Lambda, y).is_some() {
                errs.push(PdcError::Nondeterministic { state: q, top: y });
            }
            let bottoms = r.push.iter().filter(|&&s| s == StackSym::Bottom).count();
            if y == StackSym::Bottom {
                if r.push.last() != Some(&StackSym::Bottom) {
                    errs.push(PdcError::BottomPopped { state: q, input: a });
                } else if bottoms != 1 {
                    errs.push(PdcError::BottomMisplaced { state: q, input: a });
                }
            } else if bottoms != 0 {
                errs.push(PdcError::BottomMisplaced { state: q, input: a });
            }
            if self.unary && (y == StackSym::One || r.push.contains(&StackSym::One)) {
                errs.push(PdcError::NotUnary { state: q, input: a });
            }
        }
        errs.dedup();
        if let Err(e) = self.check_lambda_chains() {
            errs.push(e);
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    fn tops_after(&self, r: &PdcRule) -> Vec<StackSym> {
        match r.push.first() {
            Some(&s) => vec![s],
            None => self.stack_alphabet().to_vec(),
        }
    }

    fn check_lambda_chains(&self) -> Result<(), PdcError> {
        // abstract nodes (state, top) reachable from (q0, z0)
        let mut reach: HashSet<(State, StackSym)> = HashSet::new();
        let mut queue = VecDeque::from([(self.start, StackSym::Bottom)]);
        reach.insert((self.start, StackSym::Bottom));
        while let Some((q, y)) = queue.pop_front() {
            for a in Input::ALL {
                if let Some(r) = self.get(q, a, y) {
                    for t in self.tops_after(r) {
                        if reach.insert((r.next, t)) {
                            queue.push_back((r.next, t));
                        }
                    }
                }
            }
        }
        // longest λ-chain from each node
        let mut memo: HashMap<(State, StackSym), usize> = HashMap::new();
        let mut on_path: HashSet<(State, StackSym)> = HashSet::new();
        let mut nodes: Vec<_> = reach.into_iter().collect();
        nodes.sort();
        for node in nodes {
            let len = self.lambda_chain(node, &mut memo, &mut on_path)?;
            if len > self.lambda_budget {
                return Err(PdcError::LambdaChainTooLong { state: node.0, len, budget: self.lambda_budget });
            }
        }
        Ok(())
    }

    fn lambda_chain(
        &self,
        node: (State, StackSym),
        memo: &mut HashMap<(State, StackSym), usize>,
        on_path: &mut HashSet<(State, StackSym)>,
    ) -> Result<usize, PdcError> {
        if let Some(&v) = memo.get(&node) {
            return Ok(v);
        }
        let Some(r) = self.get(node.0, Input::Lambda, node.1) else {
            memo.insert(node, 0);
            return Ok(0);
        };
        if !on_path.insert(node) {
            return Err(PdcError::LambdaCycle(node.0));
        }
        let mut best = 0;
        for t in self.tops_after(r) {
            best = best.max(1 + self.lambda_chain((r.next, t), memo, on_path)?);
        }
        on_path.remove(&node);
        memo.insert(node, best);
        Ok(best)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdcRunResult {
    pub output: BitWord,
    pub end_state: State,
    /// Stack contents, top first; always ends with z0.
    pub stack: Vec<StackSym>,
}

impl PdcRunResult {
    pub fn stack_string(&self) -> String {
        self.stack.iter().map(|s| s.as_char()).collect()
    }
}

struct Runner<'a> {
    m: &'a PdcMachine,
    q: State,
    // top at the end
    stack: Vec<StackSym>,
    out: BitWord,
    track_output: bool,
    out_len: usize,
}

impl<'a> Runner<'a> {
    fn apply(&mut self, r: &PdcRule) {
        self.stack.pop();
        self.stack.extend(r.push.iter().rev());
        if self.track_output {
            self.out.extend_from(&r.output);
        }
        self.out_len += r.output.len();
        self.q = r.next;
    }

    fn top(&self) -> StackSym {
        *self.stack.last().expect("z0 is never popped by a valid machine")
    }

    fn closure(&mut self) -> Result<(), PdcError> {
        let mut taken = 0;
        while let Some(r) = self.m.get(self.q, Input::Lambda, self.top()) {
            if taken == self.m.lambda_budget {
                return Err(PdcError::LambdaBudgetExceeded(self.m.lambda_budget));
            }
            self.apply(r);
            taken += 1;
            if self.stack.is_empty() {
                return Err(PdcError::BottomPopped { state: self.q, input: Input::Lambda });
            }
        }
        Ok(())
    }

    fn feed(&mut self, b: bool) -> Result<(), PdcError> {
        let top = self.top();
        let r = self
            .m
            .get(self.q, Input::Bit(b), top)
            .ok_or(PdcError::Stuck { state: self.q, input: Input::Bit(b), top })?;
        self.apply(r);
        if self.stack.is_empty() {
            return Err(PdcError::BottomPopped { state: self.q, input: Input::Bit(b) });
        }
        self.closure()
    }

    fn finish(self) -> PdcRunResult {
        let mut stack = self.stack;
        stack.reverse();
        PdcRunResult { output: self.out, end_state: self.q, stack }
    }
}

/// `(C(x), δ_Q(x), stack)` from `(q0, z0)`.
pub fn pdc_run(m: &PdcMachine, x: &[bool]) -> Result<PdcRunResult, PdcError> {
    let mut r = Runner { m, q: m.start, stack: vec![StackSym::Bottom], out: BitWord::new(), track_output: true, out_len: 0 };
    r.closure()?;
    for &b in x {
        r.feed(b)?;
    }
    Ok(r.finish())
}

/// `|C(x)|` without materializing the output.
pub fn pdc_output_len(m: &PdcMachine, x: &[bool]) -> Result<usize, PdcError> {
    let mut r = Runner { m, q: m.start, stack: vec![StackSym::Bottom], out: BitWord::new(), track_output: false, out_len: 0 };
    r.closure()?;
    for &b in x {
        r.feed(b)?;
    }
    Ok(r.out_len)
}

/// Reads `x` from state `q` with the given stack (top first), without a
/// leading λ-closure: each bit is followed by its closure.
pub fn pdc_run_from(m: &PdcMachine, q: State, stack_top_first: &[StackSym], x: &[bool]) -> Result<PdcRunResult, PdcError> {
    if q >= m.num_states {
        return Err(PdcError::BadState(q));
    }
    let mut stack = stack_top_first.to_vec();
    stack.reverse();
    let mut r = Runner { m, q, stack, out: BitWord::new(), track_output: true, out_len: 0 };
    for &b in x {
        r.feed(b)?;
    }
    Ok(r.finish())
}

pub const MAX_PDC_IL_CHECK: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdcIlVerdict {
    /// Injective over all inputs of length at most the bound on which the
    /// run succeeds; `skipped` counts inputs whose run failed.
    InjectiveUpTo { max_len: usize, skipped: usize },
    Collision(BitWord, BitWord),
}

impl PdcIlVerdict {
    pub fn is_injective(&self) -> bool {
        matches!(self, PdcIlVerdict::InjectiveUpTo { .. })
    }
}

/// Exhaustive injectivity check of `x ↦ (C(x), δ_Q(x))` for `|x| <= max_len`.
pub fn pdc_il_check(m: &PdcMachine, max_len: usize) -> Result<PdcIlVerdict, PdcError> {
    if max_len > MAX_PDC_IL_CHECK {
        return Err(PdcError::BoundTooLarge(max_len, MAX_PDC_IL_CHECK));
    }
    let mut seen: HashMap<(BitWord, State), BitWord> = HashMap::new();
    let mut skipped = 0;
    for x in crate::fst::words_up_to(max_len) {
        match pdc_run(m, &x) {
            Ok(res) => {
                let key = (res.output, res.end_state);
                if let Some(prev) = seen.get(&key) {
                    return Ok(PdcIlVerdict::Collision(prev.clone(), x));
                }
                seen.insert(key, x);
            }
            Err(_) => skipped += 1,
        }
    }
    Ok(PdcIlVerdict::InjectiveUpTo { max_len, skipped })
}

/// The unique `x` with `|x| <= max_len`, `C(x) = y` and end state `q_end`,
/// found breadth-first over inputs whose output stays a prefix of `y`.
pub fn pdc_il_decode(m: &PdcMachine, y: &[bool], q_end: State, max_len: usize) -> Result<BitWord, PdcError> {
    let fits = |w: &BitWord| w.len() <= y.len() && y[..w.len()] == w[..];
    let mut found: Option<BitWord> = None;
    let mut frontier = VecDeque::new();
    frontier.push_back(BitWord::new());
    while let Some(x) = frontier.pop_front() {
        let Ok(res) = pdc_run(m, &x) else { continue };
        if !fits(&res.output) {
            continue;
        }
        if res.output.len() == y.len() && res.end_state == q_end {
            match &found {
                None => found = Some(x.clone()),
                Some(f) => return Err(PdcError::Ambiguous(f.clone(), x)),
            }
        }
        if x.len() < max_len {
            for b in [false, true] {
                frontier.push_back(x.concat(&[b]));
            }
        }
    }
    found.ok_or(PdcError::NoPreimage(max_len))
}

/// Compares the outputs from state `q` on `x` with stacks `0^{h1} z0` and
/// `0^{h2} z0`; both heights must be at least `(c+1)|x|`.
pub fn updc_height_invariance(m: &PdcMachine, q: State, x: &[bool], h1: usize, h2: usize) -> Result<bool, PdcError> {
    if !m.unary {
        return Err(PdcError::RequiresUnary);
    }
    let required = (m.lambda_budget + 1) * x.len();
    for h in [h1, h2] {
        if h < required {
            return Err(PdcError::HeightTooSmall { height: h, required });
        }
    }
    let stack = |h: usize| {
        let mut s = vec![StackSym::Zero; h];
        s.push(StackSym::Bottom);
        s
    };
    let a = pdc_run_from(m, q, &stack(h1), x).map(|r| (r.output, r.end_state));
    let b = pdc_run_from(m, q, &stack(h2), x).map(|r| (r.output, r.end_state));
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::bw;

    #[test]
    fn identity_is_valid_and_copies() {
        let m = PdcMachine::identity(false);
        assert_eq!(m.validate(), Ok(()));
        let r = pdc_run(&m, &bw("0101")).unwrap();
        assert_eq!(r.output, bw("0101"));
        assert_eq!(r.end_state, 0);
        assert_eq!(r.stack_string(), "Z");
        assert_eq!(pdc_run(&m, &[]).unwrap().output, bw(""));
    }

    #[test]
    fn determinism_violation() {
        let mut m = PdcMachine::identity(false);
        m.set(0, Input::Lambda, StackSym::Zero, PdcRule::new(0, vec![StackSym::Zero], bw(""))).unwrap();
        let errs = m.validate().unwrap_err();
        assert!(errs.contains(&PdcError::Nondeterministic { state: 0, top: StackSym::Zero }));
    }

    #[test]
    fn popping_bottom_is_rejected() {
        let mut m = PdcMachine::identity(false);
        m.set(0, Input::Bit(true), StackSym::Bottom, PdcRule::new(0, vec![], bw("1"))).unwrap();
        let errs = m.validate().unwrap_err();
        assert!(errs.contains(&PdcError::BottomPopped { state: 0, input: Input::Bit(true) }));
    }

    #[test]
    fn lambda_cycle_rejected() {
        let mut m = PdcMachine::new(2, 0, 3, false).unwrap();
        m.set(0, Input::Lambda, StackSym::Bottom, PdcRule::new(1, vec![StackSym::Bottom], bw(""))).unwrap();
        m.set(1, Input::Lambda, StackSym::Bottom, PdcRule::new(0, vec![StackSym::Bottom], bw(""))).unwrap();
        assert!(m.validate().unwrap_err().iter().any(|e| matches!(e, PdcError::LambdaCycle(_))));
        assert_eq!(pdc_run(&m, &[]), Err(PdcError::LambdaBudgetExceeded(3)));
    }

    #[test]
    fn lambda_chain_longer_than_budget_rejected() {
        let mut m = PdcMachine::new(3, 0, 1, false).unwrap();
        m.set(0, Input::Lambda, StackSym::Bottom, PdcRule::new(1, vec![StackSym::Bottom], bw(""))).unwrap();
        m.set(1, Input::Lambda, StackSym::Bottom, PdcRule::new(2, vec![StackSym::Bottom], bw(""))).unwrap();
        assert!(m
            .validate()
            .unwrap_err()
            .contains(&PdcError::LambdaChainTooLong { state: 0, len: 2, budget: 1 }));
    }

    #[test]
    fn pair_code_is_lossless() {
        for unary in [false, true] {
            let m = PdcMachine::pair_code(unary);
            assert_eq!(m.validate(), Ok(()));
            assert!(pdc_il_check(&m, 10).unwrap().is_injective());
            assert_eq!(pdc_run(&m, &bw("0011011")).unwrap().output, bw("011100"));
        }
    }

    #[test]
    fn silent_machine_collides() {
        let mut m = PdcMachine::new(1, 0, 0, false).unwrap();
        for y in StackSym::ALL {
            for b in [false, true] {
                m.set(0, Input::Bit(b), y, PdcRule::new(0, vec![y], bw(""))).unwrap();
            }
        }
        assert_eq!(pdc_il_check(&m, 2).unwrap(), PdcIlVerdict::Collision(bw(""), bw("0")));
    }

    #[test]
    fn decode_identity() {
        let m = PdcMachine::identity(false);
        assert_eq!(pdc_il_decode(&m, &bw("0110"), 0, 6).unwrap(), bw("0110"));
    }

    #[test]
    fn stack_counter_height_invariance() {
        // pops one 0 per input bit, outputs 1 while the stack still has zeros
        let mut m = PdcMachine::new(1, 0, 0, true).unwrap();
        for b in [false, true] {
            m.set(0, Input::Bit(b), StackSym::Zero, PdcRule::new(0, vec![], bw("1"))).unwrap();
            m.set(0, Input::Bit(b), StackSym::Bottom, PdcRule::new(0, vec![StackSym::Bottom], bw("0"))).unwrap();
        }
        assert_eq!(m.validate(), Ok(()));
        assert!(updc_height_invariance(&m, 0, &bw("0110"), 4, 11).unwrap());
        assert!(matches!(
            updc_height_invariance(&m, 0, &bw("0110"), 3, 11),
            Err(PdcError::HeightTooSmall { .. })
        ));
        // below the threshold the counter runs out and outputs differ
        let short = pdc_run_from(&m, 0, &[StackSym::Zero, StackSym::Bottom], &bw("00")).unwrap();
        assert_eq!(short.output, bw("10"));
    }
}
