//! Evasion, pruning, non-expression and expression (with delayed choice).

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use thiserror::Error;

use super::{Action, Interaction, LifelineSet, Trace};

/// Default node cap for [`enumerate_traces`].
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bound exceeded: trace enumeration visited more than {cap} nodes")]
pub struct BoundExceeded {
    pub cap: usize,
}

/// `i ↓ ℓ`: whether `i` can express a trace with no action on a lifeline of `lifelines`.
pub fn evades(i: &Interaction, lifelines: LifelineSet) -> bool {
    match i {
        Interaction::Empty => true,
        Interaction::Act(a) => !lifelines.contains(a.lifeline),
        Interaction::Alt(l, r) => evades(l, lifelines) || evades(r, lifelines),
        Interaction::Strict(l, r) | Interaction::CoReg(_, l, r) => {
            evades(l, lifelines) && evades(r, lifelines)
        }
        Interaction::LoopS(_) => true,
    }
}

/// Whether the empty trace belongs to the semantics, i.e. `i ↓ L`.
pub fn accepts_empty(i: &Interaction) -> bool {
    evades(i, LifelineSet::FULL)
}

/// The unique `i'` with `i ⇂ℓ i'`, or `None` when `i` does not evade `lifelines`.
pub fn prune(i: &Interaction, lifelines: LifelineSet) -> Option<Interaction> {
    if lifelines.is_empty() {
        return Some(i.clone());
    }
    prune_arc(i, lifelines).map(|(pruned, _)| pruned)
}

/// Returns the pruned term and whether it differs from the input, so that
/// unchanged sub-terms keep sharing their allocation.
fn prune_arc(i: &Interaction, lifelines: LifelineSet) -> Option<(Interaction, bool)> {
    match i {
        Interaction::Empty => Some((Interaction::Empty, false)),
        Interaction::Act(a) => {
            (!lifelines.contains(a.lifeline)).then_some((Interaction::Act(*a), false))
        }
        Interaction::Alt(l, r) => match (prune_arc(l, lifelines), prune_arc(r, lifelines)) {
            (Some(pl), Some(pr)) => Some(rebuild2(i, l, r, pl, pr)),
            (Some((pl, _)), None) => Some((pl, true)),
            (None, Some((pr, _))) => Some((pr, true)),
            (None, None) => None,
        },
        Interaction::Strict(l, r) | Interaction::CoReg(_, l, r) => {
            let pl = prune_arc(l, lifelines)?;
            let pr = prune_arc(r, lifelines)?;
            Some(rebuild2(i, l, r, pl, pr))
        }
        Interaction::LoopS(body) => match prune_arc(body, lifelines) {
            Some((_, false)) => Some((i.clone(), false)),
            Some((pb, true)) => Some((Interaction::loop_s(pb), true)),
            None => Some((Interaction::Empty, true)),
        },
    }
}

fn rebuild2(
    node: &Interaction,
    l: &Arc<Interaction>,
    r: &Arc<Interaction>,
    (pl, cl): (Interaction, bool),
    (pr, cr): (Interaction, bool),
) -> (Interaction, bool) {
    if !cl && !cr {
        return (node.clone(), false);
    }
    let left = if cl { Arc::new(pl) } else { Arc::clone(l) };
    let right = if cr { Arc::new(pr) } else { Arc::clone(r) };
    let rebuilt = match node {
        Interaction::Alt(..) => Interaction::Alt(left, right),
        Interaction::Strict(..) => Interaction::Strict(left, right),
        Interaction::CoReg(lfs, ..) => Interaction::CoReg(*lfs, left, right),
        _ => unreachable!("rebuild2 only handles binary nodes"),
    };
    (rebuilt, true)
}

/// `i ̸→a`: the non-expression predicate, defined by its own inference rules
/// rather than derived from [`next_steps`].
pub fn cannot_express(i: &Interaction, a: Action) -> bool {
    match i {
        Interaction::Empty => true,
        Interaction::Act(x) => *x != a,
        Interaction::LoopS(body) => cannot_express(body, a),
        Interaction::Strict(l, r) => {
            cannot_express(l, a) && (!evades(l, LifelineSet::FULL) || cannot_express(r, a))
        }
        Interaction::CoReg(lfs, l, r) => {
            let blocking = LifelineSet::singleton(a.lifeline).minus(*lfs);
            cannot_express(l, a) && (!evades(l, blocking) || cannot_express(r, a))
        }
        Interaction::Alt(l, r) => cannot_express(l, a) && cannot_express(r, a),
    }
}

/// Every `(a, i')` with `i →a i'`, sorted by action and free of duplicates.
pub fn next_steps(i: &Interaction) -> Vec<(Action, Interaction)> {
    let mut steps = raw_steps(i);
    normalize_steps(&mut steps);
    steps
}

fn normalize_steps(steps: &mut Vec<(Action, Interaction)>) {
    if steps.len() < 2 {
        return;
    }
    steps.sort_by_key(|(a, _)| *a);
    let mut seen: HashSet<(Action, Interaction)> = HashSet::with_capacity(steps.len());
    steps.retain(|step| seen.insert(step.clone()));
}

fn raw_steps(i: &Interaction) -> Vec<(Action, Interaction)> {
    match i {
        Interaction::Empty => Vec::new(),
        Interaction::Act(a) => vec![(*a, Interaction::Empty)],
        Interaction::LoopS(body) => raw_steps(body)
            .into_iter()
            .map(|(a, b)| (a, Interaction::Strict(Arc::new(b), Arc::new(i.clone()))))
            .collect(),
        Interaction::Strict(l, r) => {
            let mut out: Vec<_> = raw_steps(l)
                .into_iter()
                .map(|(a, l2)| (a, Interaction::Strict(Arc::new(l2), Arc::clone(r))))
                .collect();
            if evades(l, LifelineSet::FULL) {
                out.extend(raw_steps(r));
            }
            out
        }
        Interaction::CoReg(lfs, l, r) => {
            let mut out: Vec<_> = raw_steps(l)
                .into_iter()
                .map(|(a, l2)| (a, Interaction::CoReg(*lfs, Arc::new(l2), Arc::clone(r))))
                .collect();
            for (a, r2) in raw_steps(r) {
                let blocking = LifelineSet::singleton(a.lifeline).minus(*lfs);
                let pruned =
                    if blocking.is_empty() {
                        Some(Arc::clone(l))
                    } else {
                        prune_arc(l, blocking).map(|(p, changed)| {
                            if changed {
                                Arc::new(p)
                            } else {
                                Arc::clone(l)
                            }
                        })
                    };
                if let Some(pl) = pruned {
                    out.push((a, Interaction::CoReg(*lfs, pl, Arc::new(r2))));
                }
            }
            out
        }
        Interaction::Alt(l, r) => {
            let mut left = raw_steps(l);
            let mut right = raw_steps(r);
            normalize_steps(&mut left);
            normalize_steps(&mut right);
            alt_steps(left, right)
        }
    }
}

/// Combines branch steps: alt-choice when a single branch expresses the
/// action, alt-delay (pairwise merge) when both do.
fn alt_steps(
    left: Vec<(Action, Interaction)>,
    right: Vec<(Action, Interaction)>,
) -> Vec<(Action, Interaction)> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    let (mut li, mut ri) = (0, 0);
    while li < left.len() || ri < right.len() {
        let la = left.get(li).map(|s| s.0);
        let ra = right.get(ri).map(|s| s.0);
        match (la, ra) {
            (Some(a), Some(b)) if a == b => {
                let lend = group_end(&left, li);
                let rend = group_end(&right, ri);
                for (_, l2) in &left[li..lend] {
                    for (_, r2) in &right[ri..rend] {
                        out.push((a, Interaction::alt(l2.clone(), r2.clone())));
                    }
                }
                li = lend;
                ri = rend;
            }
            (Some(a), b) if b.is_none_or(|b| a < b) => {
                let lend = group_end(&left, li);
                out.extend(left[li..lend].iter().cloned());
                li = lend;
            }
            _ => {
                let rend = group_end(&right, ri);
                out.extend(right[ri..rend].iter().cloned());
                ri = rend;
            }
        }
    }
    out
}

fn group_end(steps: &[(Action, Interaction)], start: usize) -> usize {
    let a = steps[start].0;
    start + steps[start..].iter().take_while(|s| s.0 == a).count()
}

/// Every trace of the semantics with length at most `max_len`, obtained by
/// breadth-first unfolding of [`next_steps`]. Fails once more than `cap`
/// (prefix, term) nodes have been visited.
pub fn enumerate_traces(
    i: &Interaction,
    max_len: usize,
    cap: usize,
) -> Result<BTreeSet<Trace>, BoundExceeded> {
    let mut traces = BTreeSet::new();
    let mut frontier: Vec<(Trace, Interaction)> = vec![(Vec::new(), i.clone())];
    let mut visited = 1usize;
    for depth in 0..=max_len {
        let mut next: HashSet<(Trace, Interaction)> = HashSet::new();
        for (prefix, term) in &frontier {
            if accepts_empty(term) {
                traces.insert(prefix.clone());
            }
            if depth == max_len {
                continue;
            }
            for (a, succ) in next_steps(term) {
                let mut extended = prefix.clone();
                extended.push(a);
                if next.insert((extended, succ)) {
                    visited += 1;
                    if visited > cap {
                        return Err(BoundExceeded { cap });
                    }
                }
            }
        }
        frontier = next.into_iter().collect();
    }
    Ok(traces)
}
