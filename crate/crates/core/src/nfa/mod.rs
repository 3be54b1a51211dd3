//! Finite automata without ε-transitions.
//!
//! [`Nfa`] is generic over its symbol type; symbols are interned into dense
//! ids following the sorted order of the alphabet, so two automata over the
//! same alphabet agree on symbol ids.

mod dfa;
mod ops;

pub use dfa::{determinize, equivalent, minimize_dfa, Dfa, MinimizeAlgorithm, DEFAULT_STATE_CAP};
pub use ops::{concat, shuffle, star, union};

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

pub type StateId = u32;
pub type SymbolId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NfaError {
    #[error("symbol at position {position} is not in the alphabet")]
    UnknownSymbol { position: usize },
    #[error("state {0} does not exist")]
    InvalidState(StateId),
    #[error("automata have different alphabets")]
    AlphabetMismatch,
    #[error("state cap of {cap} exceeded")]
    StateCapExceeded { cap: usize },
}

/// Whole-word membership or membership in the prefix closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Prefix,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "prefix" => Ok(Mode::Prefix),
            other => Err(format!("unknown mode `{other}` (expected exact or prefix)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nfa<S> {
    alphabet: Vec<S>,
    initial: StateId,
    accepting: Vec<bool>,
    /// Outgoing edges per state, sorted by (symbol, target) and duplicate-free.
    edges: Vec<Vec<(SymbolId, StateId)>>,
}

/// Incremental construction of an [`Nfa`].
#[derive(Debug, Clone)]
pub struct NfaBuilder<S> {
    alphabet: Vec<S>,
    initial: StateId,
    accepting: Vec<bool>,
    edges: Vec<Vec<(SymbolId, StateId)>>,
}

impl<S: Ord + Clone> NfaBuilder<S> {
    /// Starts an automaton over `alphabet` (sorted and deduplicated here).
    pub fn new(alphabet: impl IntoIterator<Item = S>) -> Self {
        let mut alphabet: Vec<S> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        NfaBuilder {
            alphabet,
            initial: 0,
            accepting: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &[S] {
        &self.alphabet
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.edges.push(Vec::new());
        (self.accepting.len() - 1) as StateId
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initial = q;
    }

    pub fn set_accepting(&mut self, q: StateId, accepting: bool) {
        self.accepting[q as usize] = accepting;
    }

    pub fn symbol_id(&self, symbol: &S) -> Option<SymbolId> {
        self.alphabet
            .binary_search(symbol)
            .ok()
            .map(|i| i as SymbolId)
    }

    pub fn add_transition_id(&mut self, from: StateId, symbol: SymbolId, to: StateId) {
        self.edges[from as usize].push((symbol, to));
    }

    /// Adds `from --symbol--> to`; `false` if the symbol is not in the alphabet.
    pub fn add_transition(&mut self, from: StateId, symbol: &S, to: StateId) -> bool {
        match self.symbol_id(symbol) {
            Some(id) => {
                self.add_transition_id(from, id, to);
                true
            }
            None => false,
        }
    }

    pub fn build(mut self) -> Result<Nfa<S>, NfaError> {
        let n = self.accepting.len();
        if n == 0 {
            self.add_state(false);
        }
        let n = self.accepting.len();
        if self.initial as usize >= n {
            return Err(NfaError::InvalidState(self.initial));
        }
        for out in &mut self.edges {
            if let Some(&(_, bad)) = out.iter().find(|(_, t)| *t as usize >= n) {
                return Err(NfaError::InvalidState(bad));
            }
            out.sort_unstable();
            out.dedup();
        }
        Ok(Nfa {
            alphabet: self.alphabet,
            initial: self.initial,
            accepting: self.accepting,
            edges: self.edges,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NfaStats {
    pub schema: u32,
    pub states: usize,
    pub transitions: usize,
    pub accepting: usize,
    pub build_time_us: u128,
}

impl<S: Ord + Clone> Nfa<S> {
    /// The automaton with a single accepting state and no transitions.
    pub fn epsilon(alphabet: impl IntoIterator<Item = S>) -> Self {
        let mut b = NfaBuilder::new(alphabet);
        b.add_state(true);
        b.build().expect("valid single-state automaton")
    }

    /// The two-state automaton accepting exactly the one-letter word `symbol`.
    pub fn single(alphabet: impl IntoIterator<Item = S>, symbol: &S) -> Option<Self> {
        let mut b = NfaBuilder::new(alphabet);
        let q0 = b.add_state(false);
        let q1 = b.add_state(true);
        b.add_transition(q0, symbol, q1)
            .then(|| b.build().expect("valid"))
    }

    pub(crate) fn from_raw(
        alphabet: Vec<S>,
        initial: StateId,
        accepting: Vec<bool>,
        mut edges: Vec<Vec<(SymbolId, StateId)>>,
    ) -> Self {
        for out in &mut edges {
            out.sort_unstable();
            out.dedup();
        }
        Nfa {
            alphabet,
            initial,
            accepting,
            edges,
        }
    }

    pub fn alphabet(&self) -> &[S] {
        &self.alphabet
    }

    pub fn symbol_id(&self, symbol: &S) -> Option<SymbolId> {
        self.alphabet
            .binary_search(symbol)
            .ok()
            .map(|i| i as SymbolId)
    }

    pub fn symbol(&self, id: SymbolId) -> &S {
        &self.alphabet[id as usize]
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &acc)| acc)
            .map(|(q, _)| q as StateId)
    }

    /// Outgoing edges of `q`, sorted by symbol id then target.
    pub fn edges(&self, q: StateId) -> &[(SymbolId, StateId)] {
        &self.edges[q as usize]
    }

    /// Every transition `(from, symbol, to)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &S, StateId)> + '_ {
        self.edges.iter().enumerate().flat_map(move |(q, out)| {
            out.iter()
                .map(move |&(c, t)| (q as StateId, &self.alphabet[c as usize], t))
        })
    }

    pub fn is_deterministic(&self) -> bool {
        self.edges
            .iter()
            .all(|out| out.windows(2).all(|w| w[0].0 != w[1].0))
    }

    pub fn encode_word(&self, word: &[S]) -> Result<Vec<SymbolId>, NfaError> {
        word.iter()
            .enumerate()
            .map(|(position, s)| {
                self.symbol_id(s)
                    .ok_or(NfaError::UnknownSymbol { position })
            })
            .collect()
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (q, out) in self.edges.iter().enumerate() {
            for &(_, t) in out {
                preds[t as usize].push(q as StateId);
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<StateId> = self.accepting_states().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q as usize] {
                if !seen[p as usize] {
                    seen[p as usize] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[self.initial as usize] = true;
        let mut stack = vec![self.initial];
        while let Some(q) = stack.pop() {
            for &(_, t) in &self.edges[q as usize] {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Keeps the states flagged in `keep` (plus the initial state), renumbered
    /// in increasing order.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        let mut map = vec![StateId::MAX; self.num_states()];
        let mut next = 0;
        for q in 0..self.num_states() {
            if keep[q] || q as StateId == self.initial {
                map[q] = next;
                next += 1;
            }
        }
        let mut accepting = Vec::with_capacity(next as usize);
        let mut edges = Vec::with_capacity(next as usize);
        for q in 0..self.num_states() {
            if map[q] == StateId::MAX {
                continue;
            }
            accepting.push(self.accepting[q]);
            edges.push(
                self.edges[q]
                    .iter()
                    .filter(|(_, t)| map[*t as usize] != StateId::MAX)
                    .map(|&(c, t)| (c, map[t as usize]))
                    .collect(),
            );
        }
        Nfa::from_raw(
            self.alphabet.clone(),
            map[self.initial as usize],
            accepting,
            edges,
        )
    }

    /// Drops states unreachable from the initial state.
    pub fn accessible(&self) -> Self {
        self.restrict(&self.reachable())
    }

    /// Drops states that are unreachable or cannot reach an accepting state.
    /// The initial state is always kept.
    pub fn trim(&self) -> Self {
        let reach = self.reachable();
        let coreach = self.coreachable();
        let keep: Vec<bool> = reach.iter().zip(&coreach).map(|(a, b)| *a && *b).collect();
        self.restrict(&keep)
    }

    /// One simulation step from a sorted, duplicate-free state set.
    pub fn step_set(&self, current: &[StateId], symbol: SymbolId, out: &mut Vec<StateId>) {
        out.clear();
        for &q in current {
            let edges = &self.edges[q as usize];
            let start = edges.partition_point(|&(c, _)| c < symbol);
            out.extend(
                edges[start..]
                    .iter()
                    .take_while(|(c, _)| *c == symbol)
                    .map(|&(_, t)| t),
            );
        }
        out.sort_unstable();
        out.dedup();
    }

    /// Membership of `word` in the language (exact) or in its prefix closure.
    pub fn run_word(&self, word: &[S], mode: Mode) -> Result<bool, NfaError> {
        let encoded = self.encode_word(word)?;
        let coreach = self.coreachable();
        let mut current: Vec<StateId> = if coreach[self.initial as usize] {
            vec![self.initial]
        } else {
            Vec::new()
        };
        let mut next = Vec::new();
        for &c in &encoded {
            self.step_set(&current, c, &mut next);
            next.retain(|&q| coreach[q as usize]);
            std::mem::swap(&mut current, &mut next);
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(match mode {
            Mode::Exact => current.iter().any(|&q| self.is_accepting(q)),
            Mode::Prefix => !current.is_empty(),
        })
    }

    /// Every accepted word of length at most `max_len`.
    pub fn enumerate_language(&self, max_len: usize) -> BTreeSet<Vec<S>> {
        let coreach = self.coreachable();
        let mut words = BTreeSet::new();
        if !coreach[self.initial as usize] {
            return words;
        }
        let mut stack: Vec<(Vec<SymbolId>, Vec<StateId>)> = vec![(Vec::new(), vec![self.initial])];
        let mut next = Vec::new();
        while let Some((word, set)) = stack.pop() {
            if set.iter().any(|&q| self.is_accepting(q)) {
                words.insert(word.iter().map(|&c| self.symbol(c).clone()).collect());
            }
            if word.len() == max_len {
                continue;
            }
            let mut symbols: Vec<SymbolId> = set
                .iter()
                .flat_map(|&q| self.edges[q as usize].iter().map(|e| e.0))
                .collect();
            symbols.sort_unstable();
            symbols.dedup();
            for c in symbols {
                self.step_set(&set, c, &mut next);
                next.retain(|&q| coreach[q as usize]);
                if !next.is_empty() {
                    let mut w = word.clone();
                    w.push(c);
                    stack.push((w, next.clone()));
                }
            }
        }
        words
    }

    /// Graphviz rendering: doubled circles for accepting states, an entry
    /// arrow into the initial state, one labeled edge per transition.
    pub fn to_dot<F>(&self, label: F) -> String
    where
        F: Fn(&S) -> String,
    {
        let mut out = String::from("digraph nfa {\n    rankdir=LR;\n    __start [shape=point];\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "    q{q} [shape={shape}, label=\"{q}\"];");
        }
        let _ = writeln!(out, "    __start -> q{};", self.initial);
        for (q, s, t) in self.transitions() {
            let text = label(s).replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "    q{q} -> q{t} [label=\"{text}\"];");
        }
        out.push_str("}\n");
        out
    }

    pub fn stats(&self, build_time: Duration) -> NfaStats {
        NfaStats {
            schema: 1,
            states: self.num_states(),
            transitions: self.num_transitions(),
            accepting: self.accepting.iter().filter(|a| **a).count(),
            build_time_us: build_time.as_micros(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// (a|b)*a(a|b): the textbook 3-state NFA.
    fn ends_with_a_then_one() -> Nfa<char> {
        let mut b = NfaBuilder::new(['a', 'b']);
        let q0 = b.add_state(false);
        let q1 = b.add_state(false);
        let q2 = b.add_state(true);
        b.add_transition(q0, &'a', q0);
        b.add_transition(q0, &'b', q0);
        b.add_transition(q0, &'a', q1);
        b.add_transition(q1, &'a', q2);
        b.add_transition(q1, &'b', q2);
        b.build().unwrap()
    }

    #[test]
    fn builder_normalizes_and_validates() {
        let mut b = NfaBuilder::new(['b', 'a', 'a']);
        assert_eq!(b.alphabet(), &['a', 'b']);
        let q = b.add_state(true);
        b.add_transition(q, &'a', q);
        b.add_transition(q, &'a', q);
        assert!(!b.add_transition(q, &'z', q));
        let nfa = b.clone().build().unwrap();
        assert_eq!(nfa.num_transitions(), 1);
        b.add_transition_id(q, 0, 5);
        assert_eq!(b.build().unwrap_err(), NfaError::InvalidState(5));
    }

    #[test]
    fn runs_words() {
        let nfa = ends_with_a_then_one();
        assert!(nfa.run_word(&['a', 'b'], Mode::Exact).unwrap());
        assert!(nfa.run_word(&['b', 'a', 'a'], Mode::Exact).unwrap());
        assert!(!nfa.run_word(&['b', 'a'], Mode::Exact).unwrap());
        assert!(nfa.run_word(&['b', 'a'], Mode::Prefix).unwrap());
        assert!(nfa.run_word(&[], Mode::Prefix).unwrap());
        assert_eq!(
            nfa.run_word(&['a', 'c'], Mode::Exact),
            Err(NfaError::UnknownSymbol { position: 1 })
        );
        let eps = Nfa::epsilon(['a']);
        assert!(eps.run_word(&[], Mode::Exact).unwrap());
        assert_eq!(eps.enumerate_language(3).len(), 1);
    }

    #[test]
    fn trim_drops_dead_states() {
        let mut b = NfaBuilder::new(['a']);
        let q0 = b.add_state(false);
        let q1 = b.add_state(true);
        let dead = b.add_state(false);
        let _unreachable = b.add_state(true);
        b.add_transition(q0, &'a', q1);
        b.add_transition(q0, &'a', dead);
        let nfa = b.build().unwrap();
        let trimmed = nfa.trim();
        assert_eq!(trimmed.num_states(), 2);
        assert_eq!(trimmed.enumerate_language(3), nfa.enumerate_language(3));
    }

    #[test]
    fn dot_output_shape() {
        let dot = ends_with_a_then_one().to_dot(|c| c.to_string());
        assert!(dot.starts_with("digraph nfa {"));
        assert_eq!(dot.matches("doublecircle").count(), 1);
        assert_eq!(dot.matches("[label=\"").count(), 5);
        assert!(dot.contains("__start -> q0;"));
    }
}
