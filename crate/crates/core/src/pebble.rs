//! Two-way transducers with stack-disciplined pebbles.
//!
//! The tape for input `x` is `⊣ x ⊢` with squares `0..=|x|+1`. A
//! configuration is `(q, i, σ, w)`; the transition is selected by the state,
//! the symbol under the head and the pebble-presence vector `b` with
//! `b[j] = 1` iff pebble `j` sits on the current square.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::words::BitWord;

pub type State = usize;

pub const MAX_PEBBLES: usize = 4;

/// Default number of distinct `(q, i, σ)` triples remembered before the run
/// switches to constant-memory cycle detection.
pub const DEFAULT_VISITED_CAP: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    One,
    /// `⊣`, square 0.
    LeftEnd,
    /// `⊢`, square `|x|+1`.
    RightEnd,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::Zero, Symbol::One, Symbol::LeftEnd, Symbol::RightEnd];

    pub fn index(self) -> usize {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
            Symbol::LeftEnd => 2,
            Symbol::RightEnd => 3,
        }
    }

    pub fn bit(b: bool) -> Symbol {
        if b {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::LeftEnd => "L",
            Symbol::RightEnd => "R",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Right,
    Left,
    Push,
    Pop,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Right, Action::Left, Action::Push, Action::Pop];
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Right => "+1",
            Action::Left => "-1",
            Action::Push => "push",
            Action::Pop => "pop",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: State,
    pub action: Action,
    pub output: BitWord,
}

impl Transition {
    pub fn new(next: State, action: Action, output: BitWord) -> Self {
        Transition { next, action, output }
    }

    pub fn silent(next: State, action: Action) -> Self {
        Transition { next, action, output: BitWord::new() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbError {
    #[error("pebble count {0} exceeds the supported maximum of {MAX_PEBBLES}")]
    TooManyPebbles(usize),
    #[error("machine has no states")]
    NoStates,
    #[error("state {0} out of range")]
    BadState(State),
    #[error("pebble mask {mask:#b} out of range for {pebbles} pebbles")]
    BadMask { mask: usize, pebbles: usize },
    #[error("final state {0} has outgoing transitions")]
    FinalHasTransition(State),
    #[error("no transition for state {state} on {symbol} with pebble mask {mask:#b}")]
    Undefined { state: State, symbol: Symbol, mask: usize },
    #[error("illegal move {action} in state {state} at square {head}")]
    IllegalMove { state: State, head: usize, action: Action },
    #[error("configuration is already final")]
    AlreadyFinal,
    #[error("run revisits a configuration after {steps} steps and never halts")]
    Divergent { steps: u64 },
    #[error("step budget of {0} exhausted")]
    BudgetExceeded(u64),
    #[error("pipeline stage {stage} failed: {source}")]
    Stage { stage: usize, source: Box<PbError> },
}

/// A deterministic pebble transducer. Transitions are a partial map on
/// `(Q − F) × {0,1,⊣,⊢} × {0,1}^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PebbleMachine {
    num_states: usize,
    start: State,
    finals: Vec<bool>,
    pebbles: usize,
    table: Vec<Option<Transition>>,
}

impl PebbleMachine {
    /// An empty machine: no transitions defined yet.
    pub fn new(num_states: usize, start: State, finals: &[State], pebbles: usize) -> Result<Self, PbError> {
        if pebbles > MAX_PEBBLES {
            return Err(PbError::TooManyPebbles(pebbles));
        }
        if num_states == 0 {
            return Err(PbError::NoStates);
        }
        if start >= num_states {
            return Err(PbError::BadState(start));
        }
        let mut f = vec![false; num_states];
        for &q in finals {
            if q >= num_states {
                return Err(PbError::BadState(q));
            }
            f[q] = true;
        }
        Ok(PebbleMachine {
            num_states,
            start,
            finals: f,
            pebbles,
            table: vec![None; (num_states * 4) << pebbles],
        })
    }

    fn slot(&self, q: State, sym: Symbol, mask: usize) -> usize {
        ((q * 4 + sym.index()) << self.pebbles) | mask
    }

    pub fn set(&mut self, q: State, sym: Symbol, mask: usize, t: Transition) -> Result<(), PbError> {
        if q >= self.num_states {
            return Err(PbError::BadState(q));
        }
        if t.next >= self.num_states {
            return Err(PbError::BadState(t.next));
        }
        if mask >> self.pebbles != 0 {
            return Err(PbError::BadMask { mask, pebbles: self.pebbles });
        }
        if self.finals[q] {
            return Err(PbError::FinalHasTransition(q));
        }
        let s = self.slot(q, sym, mask);
        self.table[s] = Some(t);
        Ok(())
    }

    /// Sets the same transition for every pebble mask.
    pub fn set_all_masks(&mut self, q: State, sym: Symbol, t: Transition) -> Result<(), PbError> {
        for mask in 0..self.num_masks() {
            self.set(q, sym, mask, t.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, q: State, sym: Symbol, mask: usize) -> Option<&Transition> {
        self.table.get(self.slot(q, sym, mask))?.as_ref()
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn pebbles(&self) -> usize {
        self.pebbles
    }

    pub fn num_masks(&self) -> usize {
        1 << self.pebbles
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> Vec<State> {
        (0..self.num_states).filter(|&q| self.finals[q]).collect()
    }

    /// Every defined transition as `(state, symbol, mask, transition)`.
    pub fn transitions(&self) -> impl Iterator<Item = (State, Symbol, usize, &Transition)> {
        let k = self.pebbles;
        self.table.iter().enumerate().filter_map(move |(slot, t)| {
            let t = t.as_ref()?;
            let mask = slot & ((1 << k) - 1);
            let qs = slot >> k;
            Some((qs / 4, Symbol::ALL[qs % 4], mask, t))
        })
    }

    /// Adds one absorbing non-final state and routes every undefined
    /// `(state, symbol, mask)` of a non-final state into it. The sink walks
    /// right (left on `⊢`) forever without output. Returns the sink index.
    pub fn complete_with_sink(&mut self) -> State {
        let sink = self.num_states;
        let k = self.pebbles;
        let mut table = vec![None; ((self.num_states + 1) * 4) << k];
        table[..self.table.len()].clone_from_slice(&self.table);
        self.table = table;
        self.num_states += 1;
        self.finals.push(false);
        for q in 0..self.num_states {
            if self.finals[q] {
                continue;
            }
            for sym in Symbol::ALL {
                for mask in 0..(1 << k) {
                    let s = self.slot(q, sym, mask);
                    if self.table[s].is_none() {
                        let action = if sym == Symbol::RightEnd { Action::Left } else { Action::Right };
                        self.table[s] = Some(Transition::silent(sink, action));
                    }
                }
            }
        }
        sink
    }

    /// Identity transducer: scans right copying every bit.
    pub fn identity() -> Self {
        let mut m = PebbleMachine::new(3, 0, &[2], 0).expect("valid");
        m.set(0, Symbol::LeftEnd, 0, Transition::silent(1, Action::Right)).unwrap();
        m.set(1, Symbol::Zero, 0, Transition::new(1, Action::Right, BitWord::zeros(1))).unwrap();
        m.set(1, Symbol::One, 0, Transition::new(1, Action::Right, BitWord::ones(1))).unwrap();
        m.set(1, Symbol::RightEnd, 0, Transition::silent(2, Action::Left)).unwrap();
        m
    }
}

/// `(q, i, σ, w)`; `σ[j] = None` means pebble `j` is not placed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PbConfiguration {
    pub state: State,
    pub head: usize,
    pub pebbles: Vec<Option<usize>>,
    pub output: BitWord,
}

impl PbConfiguration {
    /// `(q0, 0, ⊥^k, λ)`.
    pub fn initial(m: &PebbleMachine) -> Self {
        PbConfiguration {
            state: m.start,
            head: 0,
            pebbles: vec![None; m.pebbles],
            output: BitWord::new(),
        }
    }

    pub fn placed(&self) -> usize {
        self.pebbles.iter().take_while(|p| p.is_some()).count()
    }

    /// No placed pebble above an unplaced one.
    pub fn is_stack_disciplined(&self) -> bool {
        let l = self.placed();
        self.pebbles[l..].iter().all(|p| p.is_none())
    }
}

fn tape_symbol(x: &[bool], i: usize) -> Symbol {
    if i == 0 {
        Symbol::LeftEnd
    } else if i == x.len() + 1 {
        Symbol::RightEnd
    } else {
        Symbol::bit(x[i - 1])
    }
}

/// One successor step.
pub fn pb_step(m: &PebbleMachine, x: &[bool], c: &PbConfiguration) -> Result<PbConfiguration, PbError> {
    if m.is_final(c.state) {
        return Err(PbError::AlreadyFinal);
    }
    let sym = tape_symbol(x, c.head);
    let mask = c
        .pebbles
        .iter()
        .enumerate()
        .fold(0, |acc, (j, p)| if *p == Some(c.head) { acc | (1 << j) } else { acc });
    let t = m
        .get(c.state, sym, mask)
        .ok_or(PbError::Undefined { state: c.state, symbol: sym, mask })?;
    let illegal = PbError::IllegalMove { state: c.state, head: c.head, action: t.action };
    let l = c.placed();
    let mut next = c.clone();
    match t.action {
        Action::Right => {
            if sym == Symbol::RightEnd {
                return Err(illegal);
            }
            next.head += 1;
        }
        Action::Left => {
            if sym == Symbol::LeftEnd {
                return Err(illegal);
            }
            next.head -= 1;
        }
        Action::Push => {
            if l == m.pebbles {
                return Err(illegal);
            }
            next.pebbles[l] = Some(c.head);
        }
        Action::Pop => {
            if l == 0 || c.pebbles[l - 1] != Some(c.head) {
                return Err(illegal);
            }
            next.pebbles[l - 1] = None;
        }
    }
    next.state = t.next;
    next.output.extend_from(&t.output);
    Ok(next)
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub visited_cap: usize,
    pub step_budget: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { visited_cap: DEFAULT_VISITED_CAP, step_budget: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Core {
    state: u32,
    head: u32,
    pebbles: [u32; MAX_PEBBLES],
}

const UNPLACED: u32 = u32::MAX;

/// Runs from `(q0, 0, ⊥^k, λ)` to the first final state.
pub fn pb_run(m: &PebbleMachine, x: &[bool]) -> Result<BitWord, PbError> {
    pb_run_with(m, x, RunOptions::default()).map(|(w, _)| w)
}

/// Like [`pb_run`], also returning the number of steps taken.
///
/// Repeats of `(q, i, σ)` are detected exactly: first with a visited set of
/// up to `visited_cap` triples, then with Brent's cycle detection.
pub fn pb_run_with(m: &PebbleMachine, x: &[bool], opts: RunOptions) -> Result<(BitWord, u64), PbError> {
    let k = m.pebbles;
    let mut cur = Core { state: m.start as u32, head: 0, pebbles: [UNPLACED; MAX_PEBBLES] };
    let mut placed = 0usize;
    let mut out = BitWord::new();
    let mut steps: u64 = 0;
    let mut visited: HashSet<Core> = HashSet::new();
    let mut use_set = true;
    // Brent state
    let mut saved = cur;
    let mut power: u64 = 1;
    let mut lam: u64 = 0;
    let right = x.len() as u32 + 1;
    loop {
        let q = cur.state as usize;
        if m.finals[q] {
            return Ok((out, steps));
        }
        if use_set {
            if !visited.insert(cur) {
                return Err(PbError::Divergent { steps });
            }
            if visited.len() >= opts.visited_cap {
                use_set = false;
                visited = HashSet::new();
                saved = cur;
                power = 1;
                lam = 0;
            }
        } else {
            if lam > 0 && cur == saved {
                return Err(PbError::Divergent { steps });
            }
            if lam == power {
                saved = cur;
                power *= 2;
                lam = 0;
            }
            lam += 1;
        }
        if let Some(b) = opts.step_budget {
            if steps >= b {
                return Err(PbError::BudgetExceeded(b));
            }
        }
        let h = cur.head;
        let sym = if h == 0 {
            Symbol::LeftEnd
        } else if h == right {
            Symbol::RightEnd
        } else {
            Symbol::bit(x[h as usize - 1])
        };
        let mut mask = 0;
        for j in 0..k {
            if cur.pebbles[j] == h {
                mask |= 1 << j;
            }
        }
        let t = m.table[((q * 4 + sym.index()) << k) | mask]
            .as_ref()
            .ok_or(PbError::Undefined { state: q, symbol: sym, mask })?;
        match t.action {
            Action::Right => {
                if sym == Symbol::RightEnd {
                    return Err(PbError::IllegalMove { state: q, head: h as usize, action: t.action });
                }
                cur.head += 1;
            }
            Action::Left => {
                if sym == Symbol::LeftEnd {
                    return Err(PbError::IllegalMove { state: q, head: h as usize, action: t.action });
                }
                cur.head -= 1;
            }
            Action::Push => {
                if placed == k {
                    return Err(PbError::IllegalMove { state: q, head: h as usize, action: t.action });
                }
                cur.pebbles[placed] = h;
                placed += 1;
            }
            Action::Pop => {
                if placed == 0 || cur.pebbles[placed - 1] != h {
                    return Err(PbError::IllegalMove { state: q, head: h as usize, action: t.action });
                }
                placed -= 1;
                cur.pebbles[placed] = UNPLACED;
            }
        }
        cur.state = t.next as u32;
        out.extend_from(&t.output);
        steps += 1;
    }
}

/// Feeds `x` through each machine in turn.
pub fn pb_pipeline(ms: &[PebbleMachine], x: &[bool]) -> Result<BitWord, PbError> {
    let mut cur = BitWord::from(x);
    for (stage, m) in ms.iter().enumerate() {
        cur = pb_run(m, &cur).map_err(|e| PbError::Stage { stage, source: Box::new(e) })?;
    }
    Ok(cur)
}

/// Reference simulator: iterates [`pb_step`] for at most `budget` steps,
/// returning `None` if the budget runs out.
pub fn pb_run_naive(m: &PebbleMachine, x: &[bool], budget: u64) -> Option<Result<BitWord, PbError>> {
    let mut c = PbConfiguration::initial(m);
    for _ in 0..=budget {
        if m.is_final(c.state) {
            return Some(Ok(c.output));
        }
        match pb_step(m, x, &c) {
            Ok(n) => c = n,
            Err(e) => return Some(Err(e)),
        }
    }
    None
}

/// `|Q|·(|x|+2)^{k+1}·(|x|+3)`: a step count past which any run has repeated a
/// configuration.
pub fn naive_budget(m: &PebbleMachine, len: usize) -> u64 {
    let n = len as u64;
    (m.num_states as u64) * (n + 2).pow(m.pebbles as u32 + 1) * (n + 3)
}
