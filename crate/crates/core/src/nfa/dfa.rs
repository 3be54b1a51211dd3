//! Subset construction, DFA minimization and language equivalence.
//!
//! DFAs are partial: a missing transition goes to an implicit sink. Minimal
//! DFAs are returned without dead states and in canonical numbering
//! (breadth-first from the initial state, edges visited in symbol order), so
//! two minimal DFAs for the same language over the same alphabet are equal.

use std::collections::{HashMap, VecDeque};
use std::ops::Deref;

use super::{Nfa, NfaError, StateId, SymbolId};

/// Default cap on the number of subsets built by determinization.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// An [`Nfa`] with at most one outgoing transition per (state, symbol).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa<S>(Nfa<S>);

impl<S> Deref for Dfa<S> {
    type Target = Nfa<S>;

    fn deref(&self) -> &Nfa<S> {
        &self.0
    }
}

impl<S: Ord + Clone> Dfa<S> {
    /// Wraps `nfa` if it is deterministic.
    pub fn from_nfa(nfa: Nfa<S>) -> Option<Self> {
        nfa.is_deterministic().then_some(Dfa(nfa))
    }

    pub fn as_nfa(&self) -> &Nfa<S> {
        &self.0
    }

    pub fn into_nfa(self) -> Nfa<S> {
        self.0
    }

    pub fn next(&self, q: StateId, symbol: SymbolId) -> Option<StateId> {
        let edges = self.0.edges(q);
        edges
            .binary_search_by_key(&symbol, |e| e.0)
            .ok()
            .map(|i| edges[i].1)
    }

    /// Renumbers reachable states breadth-first from the initial state.
    pub fn canonical(&self) -> Self {
        let n = self.num_states();
        let mut order = vec![StateId::MAX; n];
        let mut queue = VecDeque::from([self.initial()]);
        order[self.initial() as usize] = 0;
        let mut visited = vec![self.initial()];
        while let Some(q) = queue.pop_front() {
            for &(_, t) in self.edges(q) {
                if order[t as usize] == StateId::MAX {
                    order[t as usize] = visited.len() as StateId;
                    visited.push(t);
                    queue.push_back(t);
                }
            }
        }
        let accepting = visited.iter().map(|&q| self.is_accepting(q)).collect();
        let edges = visited
            .iter()
            .map(|&q| {
                self.edges(q)
                    .iter()
                    .map(|&(c, t)| (c, order[t as usize]))
                    .collect()
            })
            .collect();
        Dfa(Nfa::from_raw(self.alphabet().to_vec(), 0, accepting, edges))
    }

    /// Equality of canonical forms. Meaningful for minimal DFAs, where it
    /// coincides with isomorphism.
    pub fn isomorphic(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Outgoing edges per state.
type Adjacency = Vec<Vec<(SymbolId, StateId)>>;

/// Subset construction from an explicit set of initial states. Only non-empty
/// subsets are created, except when `initials` is empty, which yields the
/// one-state automaton of the empty language.
fn subset_construction(
    edges: &[Vec<(SymbolId, StateId)>],
    accepting: &[bool],
    mut initials: Vec<StateId>,
    cap: usize,
) -> Result<(Vec<bool>, Adjacency), NfaError> {
    initials.sort_unstable();
    initials.dedup();
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = vec![initials.clone()];
    ids.insert(initials, 0);
    let mut out_edges: Vec<Vec<(SymbolId, StateId)>> = Vec::new();
    let mut scratch: Vec<(SymbolId, StateId)> = Vec::new();
    let mut next = 0;
    while next < subsets.len() {
        scratch.clear();
        for &q in &subsets[next] {
            scratch.extend_from_slice(&edges[q as usize]);
        }
        scratch.sort_unstable();
        scratch.dedup();
        let mut row = Vec::new();
        let mut i = 0;
        while i < scratch.len() {
            let c = scratch[i].0;
            let j = i + scratch[i..].iter().take_while(|e| e.0 == c).count();
            let target: Vec<StateId> = scratch[i..j].iter().map(|e| e.1).collect();
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    if subsets.len() >= cap {
                        return Err(NfaError::StateCapExceeded { cap });
                    }
                    let id = subsets.len() as StateId;
                    subsets.push(target.clone());
                    ids.insert(target, id);
                    id
                }
            };
            row.push((c, id));
            i = j;
        }
        out_edges.push(row);
        next += 1;
    }
    let acc = subsets
        .iter()
        .map(|set| set.iter().any(|&q| accepting[q as usize]))
        .collect();
    Ok((acc, out_edges))
}

/// Subset construction over reachable subsets.
pub fn determinize<S: Ord + Clone>(nfa: &Nfa<S>, cap: usize) -> Result<Dfa<S>, NfaError> {
    let (accepting, edges) =
        subset_construction(&nfa.edges, &nfa.accepting, vec![nfa.initial], cap)?;
    Ok(Dfa(Nfa::from_raw(
        nfa.alphabet.clone(),
        0,
        accepting,
        edges,
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MinimizeAlgorithm {
    #[default]
    Hopcroft,
    Brzozowski,
}

impl std::str::FromStr for MinimizeAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hopcroft" => Ok(MinimizeAlgorithm::Hopcroft),
            "brzozowski" => Ok(MinimizeAlgorithm::Brzozowski),
            other => Err(format!(
                "unknown algorithm `{other}` (expected hopcroft or brzozowski)"
            )),
        }
    }
}

/// The minimal DFA of `L(dfa)`, without dead states, in canonical numbering.
///
/// Brzozowski's method determinizes twice and may hit `cap`; Hopcroft's never
/// does.
pub fn minimize_dfa<S: Ord + Clone>(
    dfa: &Dfa<S>,
    algorithm: MinimizeAlgorithm,
    cap: usize,
) -> Result<Dfa<S>, NfaError> {
    let minimal = match algorithm {
        MinimizeAlgorithm::Hopcroft => hopcroft(&dfa.accessible()),
        MinimizeAlgorithm::Brzozowski => brzozowski(dfa, cap)?,
    };
    Ok(minimal.canonical())
}

fn reversed_edges(n: usize, edges: &[Vec<(SymbolId, StateId)>]) -> Vec<Vec<(SymbolId, StateId)>> {
    let mut rev = vec![Vec::new(); n];
    for (q, out) in edges.iter().enumerate() {
        for &(c, t) in out {
            rev[t as usize].push((c, q as StateId));
        }
    }
    for out in &mut rev {
        out.sort_unstable();
    }
    rev
}

fn brzozowski<S: Ord + Clone>(nfa: &Nfa<S>, cap: usize) -> Result<Dfa<S>, NfaError> {
    let n = nfa.num_states();
    // reverse, then determinize from the old accepting states
    let rev = reversed_edges(n, &nfa.edges);
    let mut rev_accepting = vec![false; n];
    rev_accepting[nfa.initial as usize] = true;
    let (acc1, edges1) =
        subset_construction(&rev, &rev_accepting, nfa.accepting_states().collect(), cap)?;
    // and once more
    let n1 = acc1.len();
    let rev1 = reversed_edges(n1, &edges1);
    let mut rev1_accepting = vec![false; n1];
    rev1_accepting[0] = true;
    let initials: Vec<StateId> = (0..n1 as StateId).filter(|&q| acc1[q as usize]).collect();
    let (acc2, edges2) = subset_construction(&rev1, &rev1_accepting, initials, cap)?;
    Ok(Dfa(Nfa::from_raw(nfa.alphabet.clone(), 0, acc2, edges2)))
}

/// Partition refinement on the completed automaton; the sink class (and any
/// other dead class) is dropped afterwards.
fn hopcroft<S: Ord + Clone>(nfa: &Nfa<S>) -> Dfa<S> {
    let k = nfa.alphabet.len();
    let n0 = nfa.num_states();
    let needs_sink = nfa.edges.iter().any(|out| out.len() < k);
    let n = n0 + usize::from(needs_sink);
    let sink = n0 as StateId;

    let mut delta = vec![sink; n * k];
    for (q, out) in nfa.edges.iter().enumerate() {
        for &(c, t) in out {
            delta[q * k + c as usize] = t;
        }
    }
    let is_accepting = |q: usize| q < n0 && nfa.accepting[q];

    // inverse transitions: preds of t under c at inv[inv_start[c*n+t]..inv_start[c*n+t+1]]
    let mut inv_start = vec![0usize; k * n + 1];
    for q in 0..n {
        for c in 0..k {
            inv_start[c * n + delta[q * k + c] as usize + 1] += 1;
        }
    }
    for i in 0..k * n {
        inv_start[i + 1] += inv_start[i];
    }
    let mut fill = inv_start.clone();
    let mut inv = vec![0 as StateId; n * k];
    for q in 0..n {
        for c in 0..k {
            let slot = c * n + delta[q * k + c] as usize;
            inv[fill[slot]] = q as StateId;
            fill[slot] += 1;
        }
    }

    // partition: block b owns elems[first[b]..end[b]]; marked ones sit in [first[b]..mid[b])
    let mut elems: Vec<StateId> = (0..n as StateId)
        .filter(|&q| is_accepting(q as usize))
        .collect();
    let n_acc = elems.len();
    elems.extend((0..n as StateId).filter(|&q| !is_accepting(q as usize)));
    let mut pos = vec![0usize; n];
    for (i, &q) in elems.iter().enumerate() {
        pos[q as usize] = i;
    }
    let mut block_of = vec![0usize; n];
    let mut first = Vec::new();
    let mut end = Vec::new();
    for (lo, hi) in [(0, n_acc), (n_acc, n)] {
        if lo < hi {
            let b = first.len();
            first.push(lo);
            end.push(hi);
            for &q in &elems[lo..hi] {
                block_of[q as usize] = b;
            }
        }
    }
    let mut mid = first.clone();
    let mut in_work: Vec<bool> = vec![false; first.len() * k];
    let mut work: Vec<(usize, usize)> = Vec::new();
    if first.len() == 2 {
        let smaller = if end[0] - first[0] <= end[1] - first[1] {
            0
        } else {
            1
        };
        for c in 0..k {
            work.push((smaller, c));
            in_work[smaller * k + c] = true;
        }
    }

    let mut touched: Vec<usize> = Vec::new();
    let mut members: Vec<StateId> = Vec::new();
    while let Some((b, c)) = work.pop() {
        in_work[b * k + c] = false;
        members.clear();
        members.extend_from_slice(&elems[first[b]..end[b]]);
        for &t in &members {
            let slot = c * n + t as usize;
            for &p in &inv[inv_start[slot]..inv_start[slot + 1]] {
                let bp = block_of[p as usize];
                let pp = pos[p as usize];
                if pp >= mid[bp] {
                    let other = elems[mid[bp]];
                    elems.swap(pp, mid[bp]);
                    pos[other as usize] = pp;
                    pos[p as usize] = mid[bp];
                    if mid[bp] == first[bp] {
                        touched.push(bp);
                    }
                    mid[bp] += 1;
                }
            }
        }
        for bp in touched.drain(..) {
            let marked = mid[bp] - first[bp];
            let size = end[bp] - first[bp];
            if marked == size {
                mid[bp] = first[bp];
                continue;
            }
            let nb = first.len();
            first.push(first[bp]);
            end.push(mid[bp]);
            mid.push(first[bp]);
            // bp keeps the unmarked states, with no marks left
            first[bp] = mid[bp];
            for &q in &elems[first[nb]..end[nb]] {
                block_of[q as usize] = nb;
            }
            in_work.extend(std::iter::repeat_n(false, k));
            let smaller = if end[nb] - first[nb] <= end[bp] - first[bp] {
                nb
            } else {
                bp
            };
            for c2 in 0..k {
                let target = if in_work[bp * k + c2] { nb } else { smaller };
                if !in_work[target * k + c2] {
                    in_work[target * k + c2] = true;
                    work.push((target, c2));
                }
            }
        }
    }

    // quotient automaton
    let blocks = first.len();
    let mut accepting = vec![false; blocks];
    let mut edges = vec![Vec::new(); blocks];
    for b in 0..blocks {
        let rep = elems[first[b]] as usize;
        accepting[b] = is_accepting(rep);
        edges[b] = (0..k)
            .map(|c| {
                (
                    c as SymbolId,
                    block_of[delta[rep * k + c] as usize] as StateId,
                )
            })
            .collect();
    }
    let initial = block_of[nfa.initial as usize] as StateId;
    let quotient = Nfa::from_raw(nfa.alphabet.clone(), initial, accepting, edges);
    let live = quotient.coreachable();
    if !live[initial as usize] {
        return Dfa(Nfa::from_raw(
            nfa.alphabet.clone(),
            0,
            vec![false],
            vec![Vec::new()],
        ));
    }
    Dfa(quotient.restrict(&live))
}

/// Language equality via canonical minimal DFAs.
pub fn equivalent<S: Ord + Clone>(a: &Nfa<S>, b: &Nfa<S>, cap: usize) -> Result<bool, NfaError> {
    if a.alphabet != b.alphabet {
        return Err(NfaError::AlphabetMismatch);
    }
    let ma = minimize_dfa(&determinize(a, cap)?, MinimizeAlgorithm::Hopcroft, cap)?;
    let mb = minimize_dfa(&determinize(b, cap)?, MinimizeAlgorithm::Hopcroft, cap)?;
    Ok(ma == mb)
}
