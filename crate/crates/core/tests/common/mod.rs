//! Oracles independent from the library's operational code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use interaction_nfa::interaction::{Action, Interaction, LifelineSet, Signature, Trace};
use interaction_nfa::nfa::{Nfa, NfaBuilder};

pub type Lang = BTreeSet<Trace>;

/// Bounded denotational semantics: traces of length at most `k`, built from
/// concatenation, union, Kleene closure and the co-region merge of traces.
pub fn denotational(i: &Interaction, k: usize) -> Lang {
    match i {
        Interaction::Empty => BTreeSet::from([vec![]]),
        Interaction::Act(a) => {
            if k >= 1 {
                BTreeSet::from([vec![*a]])
            } else {
                BTreeSet::new()
            }
        }
        Interaction::Alt(l, r) => {
            let mut out = denotational(l, k);
            out.extend(denotational(r, k));
            out
        }
        Interaction::Strict(l, r) => {
            let (a, b) = (denotational(l, k), denotational(r, k));
            let mut out = BTreeSet::new();
            for u in &a {
                for v in &b {
                    if u.len() + v.len() <= k {
                        out.insert([u.as_slice(), v.as_slice()].concat());
                    }
                }
            }
            out
        }
        Interaction::CoReg(lfs, l, r) => {
            let (a, b) = (denotational(l, k), denotational(r, k));
            let mut out = BTreeSet::new();
            for u in &a {
                for v in &b {
                    if u.len() + v.len() <= k {
                        coreg_merge(u, v, *lfs, &mut Vec::new(), &mut out);
                    }
                }
            }
            out
        }
        Interaction::LoopS(body) => {
            let body: Vec<Trace> = denotational(body, k)
                .into_iter()
                .filter(|t| !t.is_empty())
                .collect();
            let mut out: Lang = BTreeSet::from([vec![]]);
            let mut fresh: Vec<Trace> = vec![vec![]];
            while !fresh.is_empty() {
                let mut next = Vec::new();
                for u in &body {
                    for v in &fresh {
                        if u.len() + v.len() <= k {
                            let w = [u.as_slice(), v.as_slice()].concat();
                            if out.insert(w.clone()) {
                                next.push(w);
                            }
                        }
                    }
                }
                fresh = next;
            }
            out
        }
    }
}

/// Merges `u` then `v` where an action of `v` may overtake the rest of `u`
/// iff its lifeline is in `lfs` or absent from the rest of `u`.
fn coreg_merge(u: &[Action], v: &[Action], lfs: LifelineSet, prefix: &mut Trace, out: &mut Lang) {
    if u.is_empty() || v.is_empty() {
        let mut w = prefix.clone();
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        out.insert(w);
        return;
    }
    prefix.push(u[0]);
    coreg_merge(&u[1..], v, lfs, prefix, out);
    prefix.pop();
    let b = v[0];
    if lfs.contains(b.lifeline) || u.iter().all(|a| a.lifeline != b.lifeline) {
        prefix.push(b);
        coreg_merge(u, &v[1..], lfs, prefix, out);
        prefix.pop();
    }
}

/// All interleavings of two words.
pub fn interleavings<S: Clone + Ord>(u: &[S], v: &[S]) -> BTreeSet<Vec<S>> {
    if u.is_empty() {
        return BTreeSet::from([v.to_vec()]);
    }
    if v.is_empty() {
        return BTreeSet::from([u.to_vec()]);
    }
    let mut out = BTreeSet::new();
    for w in interleavings(&u[1..], v) {
        out.insert([std::slice::from_ref(&u[0]), w.as_slice()].concat());
    }
    for w in interleavings(u, &v[1..]) {
        out.insert([std::slice::from_ref(&v[0]), w.as_slice()].concat());
    }
    out
}

/// Membership by exhaustive path search, without subset simulation.
pub fn naive_accepts<S: Ord + Clone>(nfa: &Nfa<S>, word: &[S]) -> bool {
    fn go<S: Ord + Clone>(nfa: &Nfa<S>, q: u32, word: &[S]) -> bool {
        match word.split_first() {
            None => nfa.is_accepting(q),
            Some((c, rest)) => nfa
                .transitions()
                .filter(|(p, s, _)| *p == q && *s == c)
                .any(|(_, _, t)| go(nfa, t, rest)),
        }
    }
    go(nfa, nfa.initial(), word)
}

/// Every word over `alphabet` of length at most `k`.
pub fn all_words<S: Clone>(alphabet: &[S], k: usize) -> Vec<Vec<S>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &layer {
            for c in alphabet {
                let mut w2: Vec<S> = w.clone();
                w2.push(c.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Words of `nfa` up to length `k`, by brute force over all words.
pub fn brute_language<S: Ord + Clone>(nfa: &Nfa<S>, k: usize) -> BTreeSet<Vec<S>> {
    all_words(nfa.alphabet(), k)
        .into_iter()
        .filter(|w| naive_accepts(nfa, w))
        .collect()
}

/// The lock specification read directly off a word: digits only, then `l!u`,
/// with the last six digits being `a a b` followed by three arbitrary ones.
pub fn lock_word_ok(sig: &Signature, word: &[Action]) -> bool {
    let name = |a: &Action| sig.action_name(*a);
    let Some((last, digits)) = word.split_last() else {
        return false;
    };
    if name(last) != "l!u" || digits.len() < 6 {
        return false;
    }
    if !digits
        .iter()
        .all(|a| matches!(name(a).as_str(), "l?a" | "l?b"))
    {
        return false;
    }
    let tail: Vec<String> = digits[digits.len() - 6..digits.len() - 3]
        .iter()
        .map(name)
        .collect();
    tail == ["l?a", "l?a", "l?b"]
}

/// `(a|b)*·a·(a|b)^n` with `n + 2` states.
pub fn nth_from_last(n: usize) -> Nfa<char> {
    let mut b = NfaBuilder::new(['a', 'b']);
    let q0 = b.add_state(false);
    b.add_transition(q0, &'a', q0);
    b.add_transition(q0, &'b', q0);
    let mut prev = b.add_state(n == 0);
    b.add_transition(q0, &'a', prev);
    for i in 0..n {
        let q = b.add_state(i + 1 == n);
        b.add_transition(prev, &'a', q);
        b.add_transition(prev, &'b', q);
        prev = q;
    }
    b.build().unwrap()
}

/// `par` of one emission per lifeline over `n` lifelines.
pub fn par_of_emissions(n: usize) -> (Signature, Interaction) {
    let sig = Signature::new((1..=n).map(|i| format!("l{i}")), ["m"]).unwrap();
    let all = sig.all_lifelines();
    let items = (0..n as u16)
        .map(|l| Interaction::act(Action::emission(l, 0)))
        .collect();
    let i = Interaction::fold_right(items, |x, y| Interaction::par(all, x, y));
    (sig, i)
}

/// Number of distinct sets among `items`.
pub fn distinct<T: std::hash::Hash + Eq>(items: impl IntoIterator<Item = T>) -> usize {
    items.into_iter().collect::<HashSet<_>>().len()
}
