//! Deterministic finite automata with output, read most-significant digit
//! first.
//!
//! Text format:
//!
//! ```text
//! digits: 0..2
//! initial: q0
//! q0 1
//! q1 3
//! q0 --0--> q0
//! q0 --1,2--> q1
//! ```
//!
//! `digits: 0..D` declares the digits `0` to `D` inclusive. Blank lines and
//! anything after `#` are ignored. A transition line may list several
//! digits; [`Dfao`]'s `Display` writes one digit per line, states in
//! declaration order, and parsing that output gives back the same text.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numeration::{NumerationError, PositionalSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaoError {
    #[error("digit {digit} outside 0..{max}")]
    DigitOutOfRange { digit: u32, max: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    max_digit: u32,
    names: Vec<String>,
    outputs: Vec<i64>,
    initial: usize,
    /// `delta[s * (max_digit + 1) + d]`
    delta: Vec<usize>,
}

impl Dfao {
    /// `transitions[s][d]` is the target of state `s` on digit `d`.
    pub fn new(
        max_digit: u32,
        names: Vec<String>,
        outputs: Vec<i64>,
        initial: usize,
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self, DfaoError> {
        let n = names.len();
        let width = max_digit as usize + 1;
        if n == 0 {
            return Err(DfaoError::Invalid("no states".into()));
        }
        if outputs.len() != n || transitions.len() != n {
            return Err(DfaoError::Invalid("state tables differ in length".into()));
        }
        if initial >= n {
            return Err(DfaoError::Invalid(format!("initial state {initial} out of range")));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if !valid_name(name) {
                return Err(DfaoError::Invalid(format!("bad state name {name:?}")));
            }
            if seen.insert(name.as_str(), i).is_some() {
                return Err(DfaoError::Invalid(format!("duplicate state {name}")));
            }
        }
        let mut delta = Vec::with_capacity(n * width);
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != width {
                return Err(DfaoError::Invalid(format!(
                    "state {} has {} transitions, expected {width}",
                    names[s],
                    row.len()
                )));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(DfaoError::Invalid(format!("target {t} out of range")));
            }
            delta.extend_from_slice(row);
        }
        Ok(Dfao {
            max_digit,
            names,
            outputs,
            initial,
            delta,
        })
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn max_digit(&self) -> u32 {
        self.max_digit
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn output(&self, state: usize) -> i64 {
        self.outputs[state]
    }

    pub fn outputs(&self) -> &[i64] {
        &self.outputs
    }

    pub fn set_output(&mut self, state: usize, value: i64) {
        self.outputs[state] = value;
    }

    pub fn transition(&self, state: usize, digit: u32) -> usize {
        self.delta[state * (self.max_digit as usize + 1) + digit as usize]
    }

    /// Distinct outputs of reachable states.
    pub fn value_set(&self) -> BTreeSet<i64> {
        self.reachable().into_iter().map(|s| self.outputs[s]).collect()
    }

    /// State reached from the initial state.
    pub fn state_after(&self, digits: &[u32]) -> Result<usize, DfaoError> {
        let mut s = self.initial;
        for &d in digits {
            if d > self.max_digit {
                return Err(DfaoError::DigitOutOfRange {
                    digit: d,
                    max: self.max_digit,
                });
            }
            s = self.transition(s, d);
        }
        Ok(s)
    }

    pub fn run(&self, digits: &[u32]) -> Result<i64, DfaoError> {
        Ok(self.outputs[self.state_after(digits)?])
    }

    /// Output on the greedy representation of `n`.
    pub fn sequence_term(&self, sys: &PositionalSystem, n: u64) -> Result<i64, DfaoError> {
        self.run(&sys.rep(n)?.digits)
    }

    pub fn sequence(&self, sys: &PositionalSystem, count: u64) -> Result<Vec<i64>, DfaoError> {
        (0..count).map(|n| self.sequence_term(sys, n)).collect()
    }

    /// Smallest `n <= n_max` where the automaton disagrees with `oracle`.
    pub fn compare_with_oracle(
        &self,
        sys: &PositionalSystem,
        oracle: impl Fn(u64) -> i64,
        n_max: u64,
    ) -> Result<Option<u64>, DfaoError> {
        for n in 0..=n_max {
            if self.sequence_term(sys, n)? != oracle(n) {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Whether reading a leading 0 keeps the initial state.
    pub fn leading_zero_invariant(&self) -> bool {
        self.transition(self.initial, 0) == self.initial
    }

    /// Reachable states in breadth-first order, digits ascending.
    fn reachable(&self) -> Vec<usize> {
        let mut order = vec![self.initial];
        let mut seen = vec![false; self.num_states()];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            for d in 0..=self.max_digit {
                let t = self.transition(s, d);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Renumbers reachable states in breadth-first order and renames them
    /// `q0, q1, ...`; unreachable states are dropped.
    pub fn canonical(&self) -> Dfao {
        let order = self.reachable();
        let mut index = vec![usize::MAX; self.num_states()];
        for (i, &s) in order.iter().enumerate() {
            index[s] = i;
        }
        let transitions = order
            .iter()
            .map(|&s| (0..=self.max_digit).map(|d| index[self.transition(s, d)]).collect())
            .collect();
        Dfao::new(
            self.max_digit,
            (0..order.len()).map(|i| format!("q{i}")).collect(),
            order.iter().map(|&s| self.outputs[s]).collect(),
            0,
            transitions,
        )
        .expect("renumbering keeps the automaton valid")
    }

    /// Equal up to renaming states and dropping unreachable ones.
    pub fn is_isomorphic(&self, other: &Dfao) -> bool {
        self.canonical() == other.canonical()
    }

    /// Drops unreachable states, keeping names and relative order.
    pub fn trim(&self) -> Dfao {
        let mut keep = self.reachable();
        keep.sort_unstable();
        let mut index = vec![usize::MAX; self.num_states()];
        for (i, &s) in keep.iter().enumerate() {
            index[s] = i;
        }
        let transitions = keep
            .iter()
            .map(|&s| (0..=self.max_digit).map(|d| index[self.transition(s, d)]).collect())
            .collect();
        Dfao::new(
            self.max_digit,
            keep.iter().map(|&s| self.names[s].clone()).collect(),
            keep.iter().map(|&s| self.outputs[s]).collect(),
            index[self.initial],
            transitions,
        )
        .expect("trimming keeps the automaton valid")
    }
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('-')
        && !name.chars().any(|c| c.is_whitespace() || c == '#')
}

impl fmt::Display for Dfao {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "digits: 0..{}", self.max_digit)?;
        writeln!(f, "initial: {}", self.names[self.initial])?;
        for (name, out) in self.names.iter().zip(&self.outputs) {
            writeln!(f, "{name} {out}")?;
        }
        for s in 0..self.num_states() {
            for d in 0..=self.max_digit {
                let t = self.transition(s, d);
                writeln!(f, "{} --{d}--> {}", self.names[s], self.names[t])?;
            }
        }
        Ok(())
    }
}

impl FromStr for Dfao {
    type Err = DfaoError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| DfaoError::Parse { line, message };
        let mut max_digit = None;
        let mut initial: Option<(usize, String)> = None;
        let mut names: Vec<String> = Vec::new();
        let mut outputs = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        // (line, from, digits, to)
        let mut edges: Vec<(usize, String, Vec<u32>, String)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("digits:") {
                if max_digit.is_some() {
                    return Err(err(line_no, "repeated digits declaration".into()));
                }
                let d = rest
                    .trim()
                    .strip_prefix("0..")
                    .and_then(|d| d.trim().parse::<u32>().ok())
                    .ok_or_else(|| err(line_no, "expected `digits: 0..D`".into()))?;
                max_digit = Some(d);
                continue;
            }
            if max_digit.is_none() {
                return Err(err(line_no, "first line must be `digits: 0..D`".into()));
            }
            if let Some(rest) = line.strip_prefix("initial:") {
                if initial.is_some() {
                    return Err(err(line_no, "repeated initial declaration".into()));
                }
                initial = Some((line_no, rest.trim().to_string()));
                continue;
            }
            if initial.is_none() {
                return Err(err(line_no, "second line must be `initial: STATE`".into()));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                [from, arrow, to] if arrow.starts_with("--") && arrow.ends_with("-->") => {
                    let inner = &arrow[2..arrow.len() - 3];
                    let digits = inner
                        .split(',')
                        .map(|d| d.trim().parse::<u32>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| err(line_no, format!("bad digit list {inner:?}")))?;
                    edges.push((line_no, from.to_string(), digits, to.to_string()));
                }
                [name, out] => {
                    if !edges.is_empty() {
                        return Err(err(line_no, "state declared after transitions".into()));
                    }
                    let out: i64 = out
                        .parse()
                        .map_err(|_| err(line_no, format!("bad output {out:?}")))?;
                    if !valid_name(name) {
                        return Err(err(line_no, format!("bad state name {name:?}")));
                    }
                    if index.insert(name.to_string(), names.len()).is_some() {
                        return Err(err(line_no, format!("duplicate state {name}")));
                    }
                    names.push(name.to_string());
                    outputs.push(out);
                }
                _ => return Err(err(line_no, format!("unrecognized line {line:?}"))),
            }
        }

        let max_digit = max_digit.ok_or_else(|| err(1, "missing digits declaration".into()))?;
        let (init_line, init_name) =
            initial.ok_or_else(|| err(1, "missing initial declaration".into()))?;
        let initial = *index
            .get(&init_name)
            .ok_or_else(|| err(init_line, format!("unknown initial state {init_name}")))?;
        let width = max_digit as usize + 1;
        let mut table = vec![vec![None; width]; names.len()];
        for (line_no, from, digits, to) in edges {
            let s = *index
                .get(&from)
                .ok_or_else(|| err(line_no, format!("unknown state {from}")))?;
            let t = *index
                .get(&to)
                .ok_or_else(|| err(line_no, format!("unknown state {to}")))?;
            for d in digits {
                if d > max_digit {
                    return Err(err(line_no, format!("digit {d} outside 0..{max_digit}")));
                }
                if table[s][d as usize].replace(t).is_some() {
                    return Err(err(line_no, format!("duplicate transition {from} on {d}")));
                }
            }
        }
        let mut transitions = Vec::with_capacity(names.len());
        for (s, row) in table.into_iter().enumerate() {
            let row: Option<Vec<usize>> = row.into_iter().collect();
            transitions.push(row.ok_or_else(|| {
                DfaoError::Invalid(format!("state {} lacks a transition", names[s]))
            })?);
        }
        Dfao::new(max_digit, names, outputs, initial, transitions)
    }
}
