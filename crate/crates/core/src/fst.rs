//! One-way deterministic finite-state transducers.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::words::{BitStreamSource, BitWord};

pub type State = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FstError {
    #[error("machine has no states")]
    Empty,
    #[error("transition table has {got} rows, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("transition ({state}, {bit}) targets unknown state {target}")]
    BadTarget { state: State, bit: u8, target: State },
    #[error("state {0} out of range")]
    BadState(State),
    #[error("length bound {0} exceeds the supported maximum of {1}")]
    BoundTooLarge(usize, usize),
    #[error("no input of length <= {0} produces the requested output and end state")]
    NoPreimage(usize),
    #[error("inputs {0} and {1} both produce the requested output and end state")]
    Ambiguous(BitWord, BitWord),
}

/// A transducer with total transition and output maps; state 0 is the start.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FstMachine {
    // next[q][b], out[q][b]
    next: Vec<[State; 2]>,
    out: Vec<[BitWord; 2]>,
}

impl FstMachine {
    pub fn new(next: Vec<[State; 2]>, out: Vec<[BitWord; 2]>) -> Result<Self, FstError> {
        if next.is_empty() {
            return Err(FstError::Empty);
        }
        if out.len() != next.len() {
            return Err(FstError::TableSize { got: out.len(), expected: next.len() });
        }
        for (q, row) in next.iter().enumerate() {
            for (b, &t) in row.iter().enumerate() {
                if t >= next.len() {
                    return Err(FstError::BadTarget { state: q, bit: b as u8, target: t });
                }
            }
        }
        Ok(FstMachine { next, out })
    }

    pub fn identity() -> Self {
        FstMachine {
            next: vec![[0, 0]],
            out: vec![[BitWord::from_bits(vec![false]), BitWord::from_bits(vec![true])]],
        }
    }

    /// One state, every bit doubled.
    pub fn doubler() -> Self {
        FstMachine {
            next: vec![[0, 0]],
            out: vec![[
                BitWord::from_bits(vec![false, false]),
                BitWord::from_bits(vec![true, true]),
            ]],
        }
    }

    pub fn num_states(&self) -> usize {
        self.next.len()
    }

    pub fn start(&self) -> State {
        0
    }

    pub fn delta(&self, q: State, b: bool) -> State {
        self.next[q][b as usize]
    }

    pub fn nu(&self, q: State, b: bool) -> &BitWord {
        &self.out[q][b as usize]
    }

    /// `(T(x), δ̂(x))`.
    pub fn run(&self, x: &[bool]) -> (BitWord, State) {
        let mut q = 0;
        let mut out = BitWord::new();
        for &b in x {
            out.extend_from(self.nu(q, b));
            q = self.delta(q, b);
        }
        (out, q)
    }

    /// Output length only, without materializing the output.
    pub fn run_len(&self, x: &[bool]) -> usize {
        let mut q = 0;
        let mut n = 0;
        for &b in x {
            n += self.nu(q, b).len();
            q = self.delta(q, b);
        }
        n
    }

    /// Largest number of consecutive transitions with empty output along any
    /// path from the start state, or `None` if an empty-output cycle is
    /// reachable.
    pub fn max_output_stall(&self) -> Option<usize> {
        let reach = self.reachable();
        let n = self.num_states();
        // longest path in the subgraph of empty-output edges among reachable states
        let mut memo: Vec<Option<usize>> = vec![None; n];
        let mut on_stack = vec![false; n];
        fn dfs(
            m: &FstMachine,
            q: State,
            memo: &mut Vec<Option<usize>>,
            on_stack: &mut Vec<bool>,
        ) -> Option<usize> {
            if let Some(v) = memo[q] {
                return Some(v);
            }
            if on_stack[q] {
                return None;
            }
            on_stack[q] = true;
            let mut best = 0;
            for b in [false, true] {
                if m.nu(q, b).is_empty() {
                    let d = dfs(m, m.delta(q, b), memo, on_stack)?;
                    best = best.max(d + 1);
                }
            }
            on_stack[q] = false;
            memo[q] = Some(best);
            Some(best)
        }
        let mut worst = 0;
        for q in 0..n {
            if reach[q] {
                worst = worst.max(dfs(self, q, &mut memo, &mut on_stack)?);
            }
        }
        Some(worst)
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(q) = stack.pop() {
            for b in [false, true] {
                let t = self.delta(q, b);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }
}

pub fn fst_run(t: &FstMachine, x: &[bool]) -> (BitWord, State) {
    t.run(x)
}

/// `|T(S ↾ n)|`.
pub fn fst_compress_len(t: &FstMachine, s: &dyn BitStreamSource, n: usize) -> usize {
    t.run_len(&s.prefix(n))
}

pub const MAX_IL_CHECK: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlVerdict {
    /// Injective on every input of length at most the bound.
    InjectiveUpTo(usize),
    /// Two distinct inputs with the same output and end state; the first
    /// collision in length-lexicographic order.
    Collision(BitWord, BitWord),
}

impl IlVerdict {
    pub fn is_injective(&self) -> bool {
        matches!(self, IlVerdict::InjectiveUpTo(_))
    }
}

/// Iterates all words of length `0..=max_len` in length-lexicographic order.
pub fn words_up_to(max_len: usize) -> impl Iterator<Item = BitWord> {
    (0..=max_len).flat_map(|len| {
        (0u64..(1u64 << len)).map(move |v| (0..len).map(|i| (v >> (len - 1 - i)) & 1 == 1).collect())
    })
}

/// Exhaustive check that `x ↦ (T(x), δ̂(x))` is injective for `|x| <= max_len`.
pub fn il_check(t: &FstMachine, max_len: usize) -> Result<IlVerdict, FstError> {
    if max_len > MAX_IL_CHECK {
        return Err(FstError::BoundTooLarge(max_len, MAX_IL_CHECK));
    }
    let mut seen: HashMap<(BitWord, State), BitWord> = HashMap::new();
    for x in words_up_to(max_len) {
        let key = t.run(&x);
        if let Some(prev) = seen.get(&key) {
            return Ok(IlVerdict::Collision(prev.clone(), x));
        }
        seen.insert(key, x);
    }
    Ok(IlVerdict::InjectiveUpTo(max_len))
}

/// Finds the unique `x` with `|x| <= max_len`, `T(x) = y` and `δ̂(x) = q_end`.
/// Breadth-first over inputs, keeping only those whose output is a prefix
/// of `y`.
pub fn il_decode(
    t: &FstMachine,
    y: &[bool],
    q_end: State,
    max_len: usize,
) -> Result<BitWord, FstError> {
    if q_end >= t.num_states() {
        return Err(FstError::BadState(q_end));
    }
    let mut found: Option<BitWord> = None;
    let mut frontier: VecDeque<(BitWord, State, usize)> = VecDeque::new();
    frontier.push_back((BitWord::new(), 0, 0));
    while let Some((x, q, produced)) = frontier.pop_front() {
        if produced == y.len() && q == q_end {
            match &found {
                None => found = Some(x.clone()),
                Some(f) => return Err(FstError::Ambiguous(f.clone(), x)),
            }
        }
        if x.len() == max_len {
            continue;
        }
        for b in [false, true] {
            let w = t.nu(q, b);
            if produced + w.len() <= y.len() && y[produced..produced + w.len()] == w[..] {
                let mut x2 = x.clone();
                x2.push(b);
                frontier.push_back((x2, t.delta(q, b), produced + w.len()));
            }
        }
    }
    found.ok_or(FstError::NoPreimage(max_len))
}

/// States lying on a cycle of empty-output transitions.
pub fn silent_cycle_states(t: &FstMachine) -> HashSet<State> {
    let mut out = HashSet::new();
    for q in 0..t.num_states() {
        // q lies on a silent cycle if q reaches itself through empty outputs
        let mut seen = vec![false; t.num_states()];
        let mut stack = vec![q];
        while let Some(p) = stack.pop() {
            for b in [false, true] {
                if t.nu(p, b).is_empty() {
                    let r = t.delta(p, b);
                    if r == q {
                        out.insert(q);
                    }
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
    }
    out
}
