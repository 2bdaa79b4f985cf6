//! Line-oriented text format for machines.
//!
//! ```text
//! fst
//! states 1
//! start 0
//! t 0 0 0 0
//! t 0 1 0 1
//! ```
//!
//! Pebble machines add `finals` and `pebbles` lines and use
//! `t <q> <0|1|L|R> <mask> <next> <+1|-1|push|pop> <out>`. Pushdown
//! compressors (`pdc` or `updc`) add `lambda-budget` and use
//! `t <q> <0|1|~> <0|1|Z> <next> <push> <out>` with the push word written
//! top first. `-` stands for the empty word; `#` starts a comment.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fst::FstMachine;
use crate::pebble::{Action, PebbleMachine, Symbol, Transition};
use crate::pushdown::{Input, PdcMachine, PdcRule, StackSym};
use crate::words::BitWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("unknown machine kind `{0}`")]
    UnknownKind(String),
    #[error("empty machine description")]
    Empty,
    #[error("fst transition for state {state} on {bit} is not given")]
    Incomplete { state: usize, bit: u8 },
    #[error("invalid machine: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    Fst(FstMachine),
    Pb(PebbleMachine),
    Pdc(PdcMachine),
}

impl Machine {
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Fst(_) => "fst",
            Machine::Pb(_) => "pb",
            Machine::Pdc(m) if m.is_unary() => "updc",
            Machine::Pdc(_) => "pdc",
        }
    }
}

fn word_or_dash(w: &[bool]) -> String {
    if w.is_empty() {
        "-".into()
    } else {
        BitWord::from(w).to_string()
    }
}

struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter_map(|(i, l)| {
                let l = l.split('#').next().unwrap_or("").trim();
                (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
            })
            .collect();
        Lines { items }
    }

    fn header(&self, key: &'static str) -> Result<Option<(usize, Vec<&'a str>)>, FormatError> {
        let mut found = self.items.iter().filter(|(_, t)| t[0] == key);
        let first = found.next().map(|(l, t)| (*l, t[1..].to_vec()));
        if let Some((line, _)) = found.next() {
            return Err(syntax(*line, format!("duplicate `{key}` line")));
        }
        Ok(first)
    }

    fn number(&self, key: &'static str) -> Result<Option<usize>, FormatError> {
        match self.header(key)? {
            None => Ok(None),
            Some((line, args)) if args.len() == 1 => parse_num(line, args[0]).map(Some),
            Some((line, _)) => Err(syntax(line, format!("`{key}` takes one number"))),
        }
    }

    fn required(&self, key: &'static str) -> Result<usize, FormatError> {
        self.number(key)?.ok_or(FormatError::Missing(key))
    }

    fn transitions(&self) -> impl Iterator<Item = &(usize, Vec<&'a str>)> {
        self.items.iter().filter(|(_, t)| t[0] == "t")
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), FormatError> {
        for (line, t) in self.items.iter().skip(1) {
            if !allowed.contains(&t[0]) {
                return Err(syntax(*line, format!("unexpected `{}`", t[0])));
            }
        }
        Ok(())
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

fn parse_num(line: usize, s: &str) -> Result<usize, FormatError> {
    s.parse().map_err(|_| syntax(line, format!("expected a number, got `{s}`")))
}

fn parse_word(line: usize, s: &str) -> Result<BitWord, FormatError> {
    if s == "-" {
        return Ok(BitWord::new());
    }
    s.parse().map_err(|_| syntax(line, format!("expected bits or `-`, got `{s}`")))
}

fn parse_bit(line: usize, s: &str) -> Result<bool, FormatError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(syntax(line, format!("expected a bit, got `{s}`"))),
    }
}

fn arity(line: usize, t: &[&str], n: usize) -> Result<(), FormatError> {
    if t.len() != n + 1 {
        return Err(syntax(line, format!("transition needs {n} fields")));
    }
    Ok(())
}

/// Parses any of the machine kinds.
pub fn parse_machine(text: &str) -> Result<Machine, FormatError> {
    let lines = Lines::new(text);
    let (line, first) = lines.items.first().ok_or(FormatError::Empty)?;
    if first.len() != 1 {
        return Err(syntax(*line, "first line must name the machine kind"));
    }
    match first[0] {
        "fst" => parse_fst_lines(&lines).map(Machine::Fst),
        "pb" => parse_pb_lines(&lines).map(Machine::Pb),
        "pdc" => parse_pdc_lines(&lines, false).map(Machine::Pdc),
        "updc" => parse_pdc_lines(&lines, true).map(Machine::Pdc),
        other => Err(FormatError::UnknownKind(other.into())),
    }
}

fn parse_fst_lines(lines: &Lines) -> Result<FstMachine, FormatError> {
    lines.check_keys(&["states", "start", "t"])?;
    let n = lines.required("states")?;
    if let Some(s) = lines.number("start")? {
        if s != 0 {
            return Err(FormatError::Invalid("fst start state must be 0".into()));
        }
    }
    let mut next = vec![[None; 2]; n];
    let mut out = vec![[BitWord::new(), BitWord::new()]; n];
    for (line, t) in lines.transitions() {
        arity(*line, t, 4)?;
        let q = parse_num(*line, t[1])?;
        let b = parse_bit(*line, t[2])? as usize;
        let p = parse_num(*line, t[3])?;
        if q >= n || p >= n {
            return Err(syntax(*line, "state out of range"));
        }
        if next[q][b].is_some() {
            return Err(syntax(*line, "duplicate transition"));
        }
        next[q][b] = Some(p);
        out[q][b] = parse_word(*line, t[4])?;
    }
    let mut full = Vec::with_capacity(n);
    for (q, row) in next.iter().enumerate() {
        let mut r = [0; 2];
        for b in 0..2 {
            r[b] = row[b].ok_or(FormatError::Incomplete { state: q, bit: b as u8 })?;
        }
        full.push(r);
    }
    FstMachine::new(full, out).map_err(|e| FormatError::Invalid(e.to_string()))
}

fn parse_symbol(line: usize, s: &str) -> Result<Symbol, FormatError> {
    match s {
        "0" => Ok(Symbol::Zero),
        "1" => Ok(Symbol::One),
        "L" => Ok(Symbol::LeftEnd),
        "R" => Ok(Symbol::RightEnd),
        _ => Err(syntax(line, format!("expected 0, 1, L or R, got `{s}`"))),
    }
}

fn parse_action(line: usize, s: &str) -> Result<Action, FormatError> {
    match s {
        "+1" => Ok(Action::Right),
        "-1" => Ok(Action::Left),
        "push" => Ok(Action::Push),
        "pop" => Ok(Action::Pop),
        _ => Err(syntax(line, format!("expected +1, -1, push or pop, got `{s}`"))),
    }
}

fn parse_pb_lines(lines: &Lines) -> Result<PebbleMachine, FormatError> {
    lines.check_keys(&["states", "start", "finals", "pebbles", "t"])?;
    let n = lines.required("states")?;
    let start = lines.number("start")?.unwrap_or(0);
    let k = lines.number("pebbles")?.unwrap_or(0);
    let finals = match lines.header("finals")? {
        None => Vec::new(),
        Some((line, args)) => args.iter().map(|a| parse_num(line, a)).collect::<Result<_, _>>()?,
    };
    let mut m = PebbleMachine::new(n, start, &finals, k).map_err(|e| FormatError::Invalid(e.to_string()))?;
    for (line, t) in lines.transitions() {
        arity(*line, t, 6)?;
        let q = parse_num(*line, t[1])?;
        let sym = parse_symbol(*line, t[2])?;
        let mask = parse_num(*line, t[3])?;
        let next = parse_num(*line, t[4])?;
        let action = parse_action(*line, t[5])?;
        let output = parse_word(*line, t[6])?;
        if m.get(q, sym, mask).is_some() {
            return Err(syntax(*line, "duplicate transition"));
        }
        m.set(q, sym, mask, Transition::new(next, action, output)).map_err(|e| syntax(*line, e.to_string()))?;
    }
    Ok(m)
}

fn parse_stack_sym(line: usize, c: char) -> Result<StackSym, FormatError> {
    match c {
        '0' => Ok(StackSym::Zero),
        '1' => Ok(StackSym::One),
        'Z' => Ok(StackSym::Bottom),
        _ => Err(syntax(line, format!("expected 0, 1 or Z, got `{c}`"))),
    }
}

fn parse_pdc_lines(lines: &Lines, unary: bool) -> Result<PdcMachine, FormatError> {
    lines.check_keys(&["states", "start", "lambda-budget", "t"])?;
    let n = lines.required("states")?;
    let start = lines.number("start")?.unwrap_or(0);
    let c = lines.number("lambda-budget")?.unwrap_or(0);
    let mut m = PdcMachine::new(n, start, c, unary).map_err(|e| FormatError::Invalid(e.to_string()))?;
    for (line, t) in lines.transitions() {
        arity(*line, t, 6)?;
        let q = parse_num(*line, t[1])?;
        let a = match t[2] {
            "~" => Input::Lambda,
            s => Input::Bit(parse_bit(*line, s)?),
        };
        let mut chars = t[3].chars();
        let top = match (chars.next(), chars.next()) {
            (Some(ch), None) => parse_stack_sym(*line, ch)?,
            _ => return Err(syntax(*line, "stack top is one symbol")),
        };
        let next = parse_num(*line, t[4])?;
        let push = if t[5] == "-" {
            Vec::new()
        } else {
            t[5].chars().map(|ch| parse_stack_sym(*line, ch)).collect::<Result<_, _>>()?
        };
        let output = parse_word(*line, t[6])?;
        if m.get(q, a, top).is_some() {
            return Err(syntax(*line, "duplicate transition"));
        }
        m.set(q, a, top, PdcRule::new(next, push, output)).map_err(|e| syntax(*line, e.to_string()))?;
    }
    Ok(m)
}

pub fn write_fst(t: &FstMachine) -> String {
    let mut s = format!("fst\nstates {}\nstart 0\n", t.num_states());
    for q in 0..t.num_states() {
        for b in [false, true] {
            let _ = writeln!(s, "t {} {} {} {}", q, b as u8, t.delta(q, b), word_or_dash(t.nu(q, b)));
        }
    }
    s
}

pub fn write_pb(m: &PebbleMachine) -> String {
    let finals: Vec<String> = m.finals().iter().map(|q| q.to_string()).collect();
    let mut s = format!(
        "pb\nstates {}\nstart {}\nfinals {}\npebbles {}\n",
        m.num_states(),
        m.start(),
        finals.join(" "),
        m.pebbles()
    );
    for (q, sym, mask, t) in m.transitions() {
        let _ = writeln!(s, "t {} {} {} {} {} {}", q, sym, mask, t.next, t.action, word_or_dash(&t.output));
    }
    s
}

pub fn write_pdc(m: &PdcMachine) -> String {
    let kind = if m.is_unary() { "updc" } else { "pdc" };
    let mut s = format!("{kind}\nstates {}\nstart {}\nlambda-budget {}\n", m.num_states(), m.start(), m.lambda_budget());
    for (q, a, y, r) in m.rules() {
        let push: String = if r.push.is_empty() { "-".into() } else { r.push.iter().map(|p| p.as_char()).collect() };
        let _ = writeln!(s, "t {} {} {} {} {} {}", q, a, y.as_char(), r.next, push, word_or_dash(&r.output));
    }
    s
}

pub fn write_machine(m: &Machine) -> String {
    match m {
        Machine::Fst(t) => write_fst(t),
        Machine::Pb(p) => write_pb(p),
        Machine::Pdc(c) => write_pdc(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fst_roundtrip() {
        let t = FstMachine::doubler();
        let text = write_fst(&t);
        assert_eq!(parse_machine(&text).unwrap(), Machine::Fst(t));
    }

    #[test]
    fn fst_identity_text() {
        let text = "fst\nstates 1\nstart 0\nt 0 0 0 0 # copy\nt 0 1 0 1\n";
        assert_eq!(parse_machine(text).unwrap(), Machine::Fst(FstMachine::identity()));
        assert_eq!(write_fst(&FstMachine::identity()), text.replace(" # copy", ""));
    }

    #[test]
    fn pb_roundtrip() {
        let m = crate::constructions::build_t_pref();
        assert_eq!(parse_machine(&write_pb(&m)).unwrap(), Machine::Pb(m));
        let id = PebbleMachine::identity();
        let text = write_pb(&id);
        assert!(text.contains("t 0 L 0 1 +1 -"));
        assert_eq!(parse_machine(&text).unwrap(), Machine::Pb(id));
    }

    #[test]
    fn pdc_roundtrip() {
        let c = crate::constructions::build_cprime(2, 3, 2).unwrap();
        assert_eq!(parse_machine(&write_pdc(&c)).unwrap(), Machine::Pdc(c));
        let u = PdcMachine::identity(true);
        let text = write_pdc(&u);
        assert!(text.starts_with("updc\n"));
        assert_eq!(parse_machine(&text).unwrap(), Machine::Pdc(u));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_machine("# nothing\n"), Err(FormatError::Empty));
        assert!(matches!(parse_machine("nfa\n"), Err(FormatError::UnknownKind(_))));
        assert!(matches!(parse_machine("fst\nstart 0\n"), Err(FormatError::Missing("states"))));
        assert!(matches!(
            parse_machine("fst\nstates 1\nt 0 0 0 0\n"),
            Err(FormatError::Incomplete { state: 0, bit: 1 })
        ));
        assert!(matches!(parse_machine("fst\nstates 1\nt 0 2 0 0\n"), Err(FormatError::Syntax { line: 3, .. })));
        assert!(matches!(parse_machine("pb\nstates 2\nt 0 X 0 1 +1 -\n"), Err(FormatError::Syntax { .. })));
    }
}
