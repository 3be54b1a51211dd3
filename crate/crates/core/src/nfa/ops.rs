//! ε-free regular operations.
//!
//! Union, concatenation and star merge initial states instead of linking
//! automata with ε-moves (Glushkov style). This needs an initial state without
//! incoming edges, which [`isolate_initial`] provides.

use std::collections::HashMap;

use super::{Nfa, NfaError, StateId, SymbolId};

fn same_alphabet<S: Ord + Clone>(a: &Nfa<S>, b: &Nfa<S>) -> Result<(), NfaError> {
    if a.alphabet == b.alphabet {
        Ok(())
    } else {
        Err(NfaError::AlphabetMismatch)
    }
}

/// Returns an equivalent automaton whose initial state has no incoming edge.
pub(crate) fn isolate_initial<S: Ord + Clone>(a: &Nfa<S>) -> Nfa<S> {
    let init = a.initial;
    let has_incoming = a.edges.iter().flatten().any(|&(_, t)| t == init);
    if !has_incoming {
        return a.clone();
    }
    let mut accepting = a.accepting.clone();
    let mut edges = a.edges.clone();
    accepting.push(a.accepting[init as usize]);
    edges.push(a.edges[init as usize].clone());
    let fresh = (accepting.len() - 1) as StateId;
    Nfa::from_raw(a.alphabet.clone(), fresh, accepting, edges).accessible()
}

/// Appends every state of `b` except its initial one, returning the id map.
fn append_without_initial<S>(
    accepting: &mut Vec<bool>,
    edges: &mut Vec<Vec<(SymbolId, StateId)>>,
    b: &Nfa<S>,
) -> Vec<StateId> {
    let mut map = vec![StateId::MAX; b.accepting.len()];
    for (q, slot) in map.iter_mut().enumerate() {
        if q as StateId != b.initial {
            *slot = accepting.len() as StateId;
            accepting.push(b.accepting[q]);
            edges.push(Vec::new());
        }
    }
    for q in 0..b.accepting.len() {
        if map[q] != StateId::MAX {
            edges[map[q] as usize] = b.edges[q]
                .iter()
                .map(|&(c, t)| (c, map[t as usize]))
                .collect();
        }
    }
    map
}

/// L(union) = L(a) ∪ L(b).
pub fn union<S: Ord + Clone>(a: &Nfa<S>, b: &Nfa<S>) -> Result<Nfa<S>, NfaError> {
    same_alphabet(a, b)?;
    let a = isolate_initial(a);
    let b = isolate_initial(b);
    let mut accepting = a.accepting.clone();
    let mut edges = a.edges.clone();
    let map = append_without_initial(&mut accepting, &mut edges, &b);
    let init = a.initial as usize;
    accepting[init] |= b.accepting[b.initial as usize];
    edges[init].extend(
        b.edges[b.initial as usize]
            .iter()
            .map(|&(c, t)| (c, map[t as usize])),
    );
    Ok(Nfa::from_raw(a.alphabet.clone(), a.initial, accepting, edges).accessible())
}

/// L(concat) = L(a) · L(b).
pub fn concat<S: Ord + Clone>(a: &Nfa<S>, b: &Nfa<S>) -> Result<Nfa<S>, NfaError> {
    same_alphabet(a, b)?;
    let b = isolate_initial(b);
    let mut accepting = a.accepting.clone();
    let mut edges = a.edges.clone();
    let map = append_without_initial(&mut accepting, &mut edges, &b);
    let b_init_edges: Vec<(SymbolId, StateId)> = b.edges[b.initial as usize]
        .iter()
        .map(|&(c, t)| (c, map[t as usize]))
        .collect();
    let b_init_accepting = b.accepting[b.initial as usize];
    for f in a.accepting_states() {
        edges[f as usize].extend(b_init_edges.iter().copied());
        accepting[f as usize] = b_init_accepting;
    }
    Ok(Nfa::from_raw(a.alphabet.clone(), a.initial, accepting, edges).accessible())
}

/// L(star) = L(a)*.
pub fn star<S: Ord + Clone>(a: &Nfa<S>) -> Nfa<S> {
    let a = isolate_initial(a);
    let mut accepting = a.accepting.clone();
    let mut edges = a.edges.clone();
    let init_edges = a.edges[a.initial as usize].clone();
    for f in a.accepting_states() {
        edges[f as usize].extend(init_edges.iter().copied());
    }
    accepting[a.initial as usize] = true;
    Nfa::from_raw(a.alphabet.clone(), a.initial, accepting, edges).accessible()
}

/// Every interleaving of a word of `a` with a word of `b`.
pub fn shuffle<S: Ord + Clone>(a: &Nfa<S>, b: &Nfa<S>) -> Result<Nfa<S>, NfaError> {
    same_alphabet(a, b)?;
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut edges: Vec<Vec<(SymbolId, StateId)>> = Vec::new();
    let mut intern = |p: (StateId, StateId),
                      pairs: &mut Vec<(StateId, StateId)>,
                      edges: &mut Vec<Vec<(SymbolId, StateId)>>| {
        *ids.entry(p).or_insert_with(|| {
            pairs.push(p);
            edges.push(Vec::new());
            (pairs.len() - 1) as StateId
        })
    };
    intern((a.initial, b.initial), &mut pairs, &mut edges);
    let mut next = 0;
    while next < pairs.len() {
        let (p, q) = pairs[next];
        let mut out = Vec::new();
        for &(c, p2) in &a.edges[p as usize] {
            out.push((c, intern((p2, q), &mut pairs, &mut edges)));
        }
        for &(c, q2) in &b.edges[q as usize] {
            out.push((c, intern((p, q2), &mut pairs, &mut edges)));
        }
        edges[next] = out;
        next += 1;
    }
    let accepting = pairs
        .iter()
        .map(|&(p, q)| a.accepting[p as usize] && b.accepting[q as usize])
        .collect();
    Ok(Nfa::from_raw(a.alphabet.clone(), 0, accepting, edges))
}
