//! Trace conformance analysis and trace generation.
//!
//! Two analysis methods are offered. [`analyze_interaction`] re-enacts the
//! trace on the interaction itself, keeping a frontier of simplified terms.
//! [`NfaAnalyzer`] reads the trace in a generated automaton.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::interaction::{
    accepts_empty, next_steps, Action, Interaction, Signature, SignatureError,
};
use crate::nfa::{Mode, Nfa, StateId, SymbolId};
use crate::simplify::simplify;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
pub const DEFAULT_ERROR_ATTEMPTS: usize = 64;

/// Token standing for the empty trace in trace files.
pub const EMPTY_TRACE_TOKEN: &str = "ε";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Interaction,
    #[default]
    Nfa,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Interaction => "interaction",
            Method::Nfa => "nfa",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "interaction" => Ok(Method::Interaction),
            "nfa" => Ok(Method::Nfa),
            other => Err(format!(
                "unknown method `{other}` (expected interaction or nfa)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Actions read before the verdict was reached.
    pub consumed: usize,
    pub elapsed: Duration,
    pub method: Method,
    pub mode: Mode,
}

impl Verdict {
    pub fn record(&self, trace_index: usize) -> VerdictRecord {
        VerdictRecord {
            trace_index,
            method: self.method,
            mode: self.mode,
            outcome: self.outcome,
            consumed: self.consumed,
            elapsed_us: self.elapsed.as_micros(),
        }
    }
}

/// One line of the JSON-lines results output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerdictRecord {
    pub trace_index: usize,
    pub method: Method,
    pub mode: Mode,
    pub outcome: Outcome,
    pub consumed: usize,
    pub elapsed_us: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("action at position {position} is not in the alphabet")]
    UnknownAction { position: usize },
}

/// Re-enacts `trace` on `i`. The frontier holds the distinct simplified terms
/// reachable by the prefix read so far.
pub fn analyze_interaction(
    sig: &Signature,
    i: &Interaction,
    trace: &[Action],
    mode: Mode,
    timeout: Option<Duration>,
) -> Result<Verdict, AnalysisError> {
    if let Some(position) = trace.iter().position(|a| !sig.contains_action(*a)) {
        return Err(AnalysisError::UnknownAction { position });
    }
    let start = Instant::now();
    let verdict = |outcome, consumed| Verdict {
        outcome,
        consumed,
        elapsed: start.elapsed(),
        method: Method::Interaction,
        mode,
    };
    let mut frontier = vec![simplify(i)];
    let mut seen: HashSet<Interaction> = HashSet::new();
    for (k, &a) in trace.iter().enumerate() {
        if timeout.is_some_and(|t| start.elapsed() > t) {
            return Ok(verdict(Outcome::Timeout, k));
        }
        seen.clear();
        let mut next = Vec::new();
        for term in &frontier {
            for (b, succ) in next_steps(term) {
                if b == a {
                    let succ = simplify(&succ);
                    if seen.insert(succ.clone()) {
                        next.push(succ);
                    }
                }
            }
        }
        if next.is_empty() {
            return Ok(verdict(Outcome::Fail, k));
        }
        frontier = next;
    }
    let pass = match mode {
        Mode::Exact => frontier.iter().any(accepts_empty),
        Mode::Prefix => true,
    };
    Ok(verdict(
        if pass { Outcome::Pass } else { Outcome::Fail },
        trace.len(),
    ))
}

/// Reads traces in an automaton restricted to its co-reachable states, so that
/// an empty state set means no extension can be accepted.
#[derive(Debug, Clone)]
pub struct NfaAnalyzer<S> {
    nfa: Nfa<S>,
    live_initial: bool,
}

impl<S: Ord + Clone> NfaAnalyzer<S> {
    pub fn new(nfa: &Nfa<S>) -> Self {
        let nfa = nfa.trim();
        let live_initial = nfa.coreachable()[nfa.initial() as usize];
        NfaAnalyzer { nfa, live_initial }
    }

    pub fn nfa(&self) -> &Nfa<S> {
        &self.nfa
    }

    fn initial_set(&self) -> Vec<StateId> {
        if self.live_initial {
            vec![self.nfa.initial()]
        } else {
            Vec::new()
        }
    }

    pub fn analyze(
        &self,
        trace: &[S],
        mode: Mode,
        timeout: Option<Duration>,
    ) -> Result<Verdict, AnalysisError> {
        let start = Instant::now();
        let encoded: Vec<SymbolId> = self.nfa.encode_word(trace).map_err(|e| match e {
            crate::nfa::NfaError::UnknownSymbol { position } => {
                AnalysisError::UnknownAction { position }
            }
            _ => AnalysisError::UnknownAction { position: 0 },
        })?;
        let verdict = |outcome, consumed| Verdict {
            outcome,
            consumed,
            elapsed: start.elapsed(),
            method: Method::Nfa,
            mode,
        };
        let mut current = self.initial_set();
        if current.is_empty() {
            return Ok(verdict(Outcome::Fail, 0));
        }
        let mut next = Vec::new();
        for (k, &c) in encoded.iter().enumerate() {
            if timeout.is_some_and(|t| start.elapsed() > t) {
                return Ok(verdict(Outcome::Timeout, k));
            }
            self.nfa.step_set(&current, c, &mut next);
            if next.is_empty() {
                return Ok(verdict(Outcome::Fail, k));
            }
            std::mem::swap(&mut current, &mut next);
        }
        let pass = match mode {
            Mode::Exact => current.iter().any(|&q| self.nfa.is_accepting(q)),
            Mode::Prefix => true,
        };
        Ok(verdict(
            if pass { Outcome::Pass } else { Outcome::Fail },
            trace.len(),
        ))
    }
}

/// One-shot NFA analysis. Prefer [`NfaAnalyzer`] for many traces.
pub fn analyze_nfa<S: Ord + Clone>(
    nfa: &Nfa<S>,
    trace: &[S],
    mode: Mode,
    timeout: Option<Duration>,
) -> Result<Verdict, AnalysisError> {
    NfaAnalyzer::new(nfa).analyze(trace, mode, timeout)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("no accepted word has a length in [{min}, {max}]")]
    Unsatisfiable { min: usize, max: usize },
    #[error("trace {index} stays in the language for {attempts} appended actions")]
    CannotFalsify { index: usize, attempts: usize },
    #[error("base trace {index} is not accepted")]
    NotAccepted { index: usize },
}

fn trace_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// `count` accepted words with lengths in `[min_len, max_len]`.
///
/// A length is drawn uniformly among the feasible ones, then a random run of
/// exactly that length is taken, only choosing edges from which an accepting
/// state remains reachable in the remaining number of steps.
pub fn gen_accepted<S: Ord + Clone>(
    nfa: &Nfa<S>,
    count: usize,
    min_len: usize,
    max_len: usize,
    seed: u64,
) -> Result<Vec<Vec<S>>, GenError> {
    let nfa = nfa.trim();
    let n = nfa.num_states();
    // can[k][q]: some accepted word of length exactly k starts at q
    let mut can: Vec<Vec<bool>> = Vec::with_capacity(max_len + 1);
    can.push((0..n).map(|q| nfa.is_accepting(q as StateId)).collect());
    for k in 1..=max_len {
        let prev = &can[k - 1];
        let row = (0..n)
            .map(|q| {
                nfa.edges(q as StateId)
                    .iter()
                    .any(|&(_, t)| prev[t as usize])
            })
            .collect();
        can.push(row);
    }
    let q0 = nfa.initial() as usize;
    let lengths: Vec<usize> = (min_len..=max_len).filter(|&k| can[k][q0]).collect();
    if lengths.is_empty() {
        return Err(GenError::Unsatisfiable {
            min: min_len,
            max: max_len,
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut choices = Vec::new();
    for index in 0..count {
        let mut rng = trace_rng(seed, index);
        let len = *lengths.choose(&mut rng).expect("non-empty");
        let mut q = nfa.initial();
        let mut word = Vec::with_capacity(len);
        for remaining in (1..=len).rev() {
            choices.clear();
            choices.extend(
                nfa.edges(q)
                    .iter()
                    .filter(|&&(_, t)| can[remaining - 1][t as usize]),
            );
            let &(c, t) = choices.choose(&mut rng).expect("feasible by construction");
            word.push(nfa.symbol(c).clone());
            q = t;
        }
        out.push(word);
    }
    Ok(out)
}

/// Extends each accepted base trace with random actions until it fails in
/// `mode`, appending at most `attempts` actions.
pub fn gen_errors<S: Ord + Clone>(
    nfa: &Nfa<S>,
    base: &[Vec<S>],
    mode: Mode,
    seed: u64,
    attempts: usize,
) -> Result<Vec<Vec<S>>, GenError> {
    let nfa = nfa.trim();
    let k = nfa.alphabet().len() as SymbolId;
    let mut out = Vec::with_capacity(base.len());
    let mut next = Vec::new();
    for (index, trace) in base.iter().enumerate() {
        let not_accepted = GenError::NotAccepted { index };
        let encoded = nfa.encode_word(trace).map_err(|_| not_accepted.clone())?;
        let mut current = vec![nfa.initial()];
        for &c in &encoded {
            nfa.step_set(&current, c, &mut next);
            std::mem::swap(&mut current, &mut next);
        }
        if !current.iter().any(|&q| nfa.is_accepting(q)) {
            return Err(not_accepted);
        }
        let mut rng = trace_rng(seed, index);
        let mut word = trace.clone();
        let mut failed = false;
        for _ in 0..attempts {
            if k == 0 {
                break;
            }
            let c = rng.gen_range(0..k);
            word.push(nfa.symbol(c).clone());
            nfa.step_set(&current, c, &mut next);
            std::mem::swap(&mut current, &mut next);
            failed = match mode {
                Mode::Prefix => current.is_empty(),
                Mode::Exact => !current.iter().any(|&q| nfa.is_accepting(q)),
            };
            if failed {
                break;
            }
        }
        if !failed {
            return Err(GenError::CannotFalsify { index, attempts });
        }
        out.push(word);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {source}")]
pub struct TraceFileError {
    pub line: usize,
    #[source]
    pub source: SignatureError,
}

/// One trace per line; `#` starts a comment, blank lines are skipped and a
/// line holding only `ε` is the empty trace.
pub fn parse_trace_file(sig: &Signature, text: &str) -> Result<Vec<Vec<Action>>, TraceFileError> {
    let mut traces = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == EMPTY_TRACE_TOKEN {
            traces.push(Vec::new());
            continue;
        }
        let trace = sig.parse_trace(line).map_err(|source| TraceFileError {
            line: n + 1,
            source,
        })?;
        traces.push(trace);
    }
    Ok(traces)
}

pub fn write_trace_file(sig: &Signature, traces: &[Vec<Action>]) -> String {
    let mut out = String::new();
    for t in traces {
        if t.is_empty() {
            out.push_str(EMPTY_TRACE_TOKEN);
        } else {
            out.push_str(&sig.trace_text(t));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;
    use crate::translate::{build_nfa, DEFAULT_STATE_CAP};

    fn setup(text: &str) -> (Signature, Interaction, Nfa<Action>) {
        let m = parse_model(text).unwrap();
        let nfa = build_nfa(&m.signature, &m.interaction, true, DEFAULT_STATE_CAP)
            .unwrap()
            .nfa;
        (m.signature, m.interaction, nfa)
    }

    #[test]
    fn prefix_versus_exact() {
        let (s, i, nfa) = setup("lifelines l1 l2; messages m; strict(l1!m, l2?m)");
        let t = s.parse_trace("l1!m").unwrap();
        for mode in [Mode::Exact, Mode::Prefix] {
            let vi = analyze_interaction(&s, &i, &t, mode, None).unwrap();
            let vn = analyze_nfa(&nfa, &t, mode, None).unwrap();
            assert_eq!(vi.outcome, vn.outcome);
            assert_eq!(vi.consumed, 1);
        }
        let v = analyze_nfa(&nfa, &t, Mode::Exact, None).unwrap();
        assert_eq!(v.outcome, Outcome::Fail);
        assert_eq!(
            analyze_nfa(&nfa, &t, Mode::Prefix, None).unwrap().outcome,
            Outcome::Pass
        );
    }

    #[test]
    fn failure_point() {
        let (s, i, nfa) = setup("lifelines l1 l2; messages m; strict(l1!m, l2?m)");
        let t = s.parse_trace("l1!m l1!m l2?m").unwrap();
        let vi = analyze_interaction(&s, &i, &t, Mode::Prefix, None).unwrap();
        let vn = analyze_nfa(&nfa, &t, Mode::Prefix, None).unwrap();
        assert_eq!((vi.outcome, vi.consumed), (Outcome::Fail, 1));
        assert_eq!((vn.outcome, vn.consumed), (Outcome::Fail, 1));
    }

    #[test]
    fn empty_interaction_accepts_empty_trace() {
        let (s, i, nfa) = setup("lifelines l; messages m; 0");
        assert_eq!(
            analyze_nfa(&nfa, &[], Mode::Exact, None).unwrap().outcome,
            Outcome::Pass
        );
        assert_eq!(
            analyze_interaction(&s, &i, &[], Mode::Exact, None)
                .unwrap()
                .outcome,
            Outcome::Pass
        );
        let g = gen_accepted(&nfa, 3, 0, 0, 1).unwrap();
        assert_eq!(g, vec![Vec::<Action>::new(); 3]);
    }

    #[test]
    fn generation_is_sound_and_seeded() {
        let (s, i, nfa) = setup(
            "lifelines l1 l2; messages m n;\n\
             loopS(alt(strict(l1!m, l2?m), seq(l2!n, l1?n)))",
        );
        let acc = gen_accepted(&nfa, 20, 2, 12, 7).unwrap();
        assert_eq!(acc, gen_accepted(&nfa, 20, 2, 12, 7).unwrap());
        for t in &acc {
            assert!((2..=12).contains(&t.len()));
            let v = analyze_interaction(&s, &i, t, Mode::Exact, None).unwrap();
            assert_eq!(v.outcome, Outcome::Pass);
        }
        let errs = gen_errors(&nfa, &acc, Mode::Prefix, 7, DEFAULT_ERROR_ATTEMPTS).unwrap();
        assert_eq!(errs, gen_errors(&nfa, &acc, Mode::Prefix, 7, 64).unwrap());
        for (e, a) in errs.iter().zip(&acc) {
            assert!(e.starts_with(a) && e.len() > a.len());
            let v = analyze_nfa(&nfa, e, Mode::Prefix, None).unwrap();
            assert_eq!(v.outcome, Outcome::Fail);
        }
    }

    #[test]
    fn odd_lengths_are_unsatisfiable() {
        let (_, _, nfa) = setup("lifelines l1 l2; messages m; loopS(strict(l1!m, l2?m))");
        assert_eq!(
            gen_accepted(&nfa, 1, 3, 3, 0).unwrap_err(),
            GenError::Unsatisfiable { min: 3, max: 3 }
        );
    }

    #[test]
    fn universal_language_cannot_be_falsified() {
        let (_, _, nfa) = setup("lifelines l; messages m; loopS(alt(l!m, l?m))");
        assert!(matches!(
            gen_errors(&nfa, &[vec![]], Mode::Prefix, 0, 8),
            Err(GenError::CannotFalsify {
                index: 0,
                attempts: 8
            })
        ));
    }

    #[test]
    fn trace_file_round_trip() {
        let s = Signature::new(["l1", "l2"], ["m"]).unwrap();
        let text = "# header\nl1!m l2?m\n\nε\nl2?m # tail\n";
        let traces = parse_trace_file(&s, text).unwrap();
        assert_eq!(traces.len(), 3);
        assert!(traces[1].is_empty());
        assert_eq!(
            parse_trace_file(&s, &write_trace_file(&s, &traces)).unwrap(),
            traces
        );
        let err = parse_trace_file(&s, "l1!m\nl3!m\n").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
