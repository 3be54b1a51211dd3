//! From interactions to automata.
//!
//! [`build_nfa`] explores the reachable interactions breadth-first. Each
//! distinct term (after simplification, when requested) becomes one state.
//! [`compo`] is the compositional baseline: maximal basic sub-terms are
//! translated by exploration and glued with the regular operations.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::interaction::{accepts_empty, next_steps, Action, Interaction, Signature};
use crate::model::print_term;
use crate::nfa::{self, Nfa, NfaBuilder, NfaError, StateId};
use crate::simplify::simplify;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("state cap of {cap} exceeded with {frontier} terms still queued")]
    StateCapExceeded { cap: usize, frontier: usize },
    #[error("interaction uses names outside its signature")]
    InvalidTerm,
}

/// Dense numbering of the terms met during exploration.
#[derive(Debug, Clone, Default)]
pub struct StateIndex {
    terms: Vec<Interaction>,
    ids: HashMap<Interaction, StateId>,
}

impl StateIndex {
    fn intern(&mut self, term: Interaction) -> (StateId, bool) {
        if let Some(&id) = self.ids.get(&term) {
            return (id, false);
        }
        let id = self.terms.len() as StateId;
        self.ids.insert(term.clone(), id);
        self.terms.push(term);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, id: StateId) -> &Interaction {
        &self.terms[id as usize]
    }

    pub fn id(&self, term: &Interaction) -> Option<StateId> {
        self.ids.get(term).copied()
    }

    pub fn terms(&self) -> &[Interaction] {
        &self.terms
    }

    /// One `id<TAB>term` line per state.
    pub fn dump(&self, sig: &Signature) -> String {
        let mut out = String::new();
        for (id, term) in self.terms.iter().enumerate() {
            let _ = writeln!(out, "{id}\t{}", print_term(sig, term));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Translation {
    pub nfa: Nfa<Action>,
    pub index: StateIndex,
}

/// Builds `nfa(i0)` or, with `simplified`, `nfa_s(i0)`. State 0 is `i0`
/// (simplified when requested); state ids follow discovery order.
pub fn build_nfa(
    sig: &Signature,
    i0: &Interaction,
    simplified: bool,
    cap: usize,
) -> Result<Translation, TranslateError> {
    if !i0.is_valid_for(sig) {
        return Err(TranslateError::InvalidTerm);
    }
    let canon = |t: Interaction| if simplified { simplify(&t) } else { t };
    let mut index = StateIndex::default();
    let mut builder = NfaBuilder::new(sig.alphabet());
    let mut queue = VecDeque::new();

    let (q0, _) = index.intern(canon(i0.clone()));
    builder.add_state(accepts_empty(index.term(q0)));
    queue.push_back(q0);

    while let Some(q) = queue.pop_front() {
        for (action, succ) in next_steps(index.term(q)) {
            let (t, fresh) = index.intern(canon(succ));
            if fresh {
                if index.len() > cap {
                    return Err(TranslateError::StateCapExceeded {
                        cap,
                        frontier: queue.len() + 1,
                    });
                }
                builder.add_state(accepts_empty(index.term(t)));
                queue.push_back(t);
            }
            builder.add_transition(q, &action, t);
        }
    }
    let nfa = builder.build().expect("exploration yields valid ids");
    Ok(Translation { nfa, index })
}

/// True iff `i` contains only ∅, actions, `strict` and `seq`.
pub fn is_basic(i: &Interaction) -> bool {
    match i {
        Interaction::Empty | Interaction::Act(_) => true,
        Interaction::Strict(l, r) => is_basic(l) && is_basic(r),
        Interaction::CoReg(lfs, l, r) => lfs.is_empty() && is_basic(l) && is_basic(r),
        Interaction::Alt(..) | Interaction::LoopS(_) => false,
    }
}

/// Path from the root as child indices (0 = left or body, 1 = right).
pub type TermPosition = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompoError {
    #[error("co-region above a non-basic sub-term at position {}", format_position(.position))]
    UnsupportedScope { position: TermPosition },
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

fn format_position(p: &[u8]) -> String {
    if p.is_empty() {
        "root".to_string()
    } else {
        p.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Compositional translation. Outside maximal basic sub-terms only `alt`,
/// `strict`, `loopS` and `par` are allowed.
pub fn compo(sig: &Signature, i0: &Interaction) -> Result<Nfa<Action>, CompoError> {
    let mut position = Vec::new();
    compo_at(sig, i0, &mut position)
}

fn compo_at(
    sig: &Signature,
    i: &Interaction,
    position: &mut TermPosition,
) -> Result<Nfa<Action>, CompoError> {
    if is_basic(i) {
        return Ok(build_nfa(sig, i, true, DEFAULT_STATE_CAP)?.nfa);
    }
    let child = |idx: u8, t: &Interaction, position: &mut TermPosition| {
        position.push(idx);
        let r = compo_at(sig, t, position);
        position.pop();
        r
    };
    match i {
        Interaction::Alt(l, r) => {
            let a = child(0, l, position)?;
            let b = child(1, r, position)?;
            Ok(nfa::union(&a, &b)?)
        }
        Interaction::Strict(l, r) => {
            let a = child(0, l, position)?;
            let b = child(1, r, position)?;
            Ok(nfa::concat(&a, &b)?)
        }
        Interaction::CoReg(lfs, l, r) if *lfs == sig.all_lifelines() => {
            let a = child(0, l, position)?;
            let b = child(1, r, position)?;
            Ok(nfa::shuffle(&a, &b)?)
        }
        Interaction::LoopS(body) => Ok(nfa::star(&child(0, body, position)?)),
        _ => Err(CompoError::UnsupportedScope {
            position: position.clone(),
        }),
    }
}
