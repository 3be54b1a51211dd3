//! The ∅-elimination rewrite system and normal-form computation.
//!
//! Rules, for `f` ranging over `strict` and every co-region `cr_ℓ`:
//!
//! ```text
//! f(∅, x)          ~> x
//! f(x, ∅)          ~> x
//! alt(∅, loopS(x)) ~> loopS(x)
//! alt(loopS(x), ∅) ~> loopS(x)
//! alt(∅, ∅)        ~> ∅
//! loopS(∅)         ~> ∅
//! ```
//!
//! Every rule strictly decreases the node count, so rewriting terminates.
//! Any redex found at a node whose children are already irreducible rewrites
//! to an irreducible term, so a single bottom-up pass reaches the normal form.

use std::sync::Arc;

use rand::Rng;

use crate::interaction::Interaction;

/// One rule schema of the rewrite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewriteRule {
    StrictEmptyLeft,
    StrictEmptyRight,
    CoRegEmptyLeft,
    CoRegEmptyRight,
    AltEmptyLoop,
    AltLoopEmpty,
    AltEmptyEmpty,
    LoopEmpty,
}

impl RewriteRule {
    pub const ALL: [RewriteRule; 8] = [
        RewriteRule::StrictEmptyLeft,
        RewriteRule::StrictEmptyRight,
        RewriteRule::CoRegEmptyLeft,
        RewriteRule::CoRegEmptyRight,
        RewriteRule::AltEmptyLoop,
        RewriteRule::AltLoopEmpty,
        RewriteRule::AltEmptyEmpty,
        RewriteRule::LoopEmpty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RewriteRule::StrictEmptyLeft => "strict-empty-left",
            RewriteRule::StrictEmptyRight => "strict-empty-right",
            RewriteRule::CoRegEmptyLeft => "coreg-empty-left",
            RewriteRule::CoRegEmptyRight => "coreg-empty-right",
            RewriteRule::AltEmptyLoop => "alt-empty-loop",
            RewriteRule::AltLoopEmpty => "alt-loop-empty",
            RewriteRule::AltEmptyEmpty => "alt-empty-empty",
            RewriteRule::LoopEmpty => "loop-empty",
        }
    }

    pub fn pattern(self) -> &'static str {
        match self {
            RewriteRule::StrictEmptyLeft => "strict(0, x)",
            RewriteRule::StrictEmptyRight => "strict(x, 0)",
            RewriteRule::CoRegEmptyLeft => "coreg[_](0, x)",
            RewriteRule::CoRegEmptyRight => "coreg[_](x, 0)",
            RewriteRule::AltEmptyLoop => "alt(0, loopS(x))",
            RewriteRule::AltLoopEmpty => "alt(loopS(x), 0)",
            RewriteRule::AltEmptyEmpty => "alt(0, 0)",
            RewriteRule::LoopEmpty => "loopS(0)",
        }
    }

    pub fn replacement(self) -> &'static str {
        match self {
            RewriteRule::AltEmptyLoop | RewriteRule::AltLoopEmpty => "loopS(x)",
            RewriteRule::AltEmptyEmpty | RewriteRule::LoopEmpty => "0",
            _ => "x",
        }
    }

    /// Applies the rule at the root of `term`, if it matches.
    pub fn apply(self, term: &Interaction) -> Option<Interaction> {
        use Interaction as I;
        match (self, term) {
            (RewriteRule::StrictEmptyLeft, I::Strict(l, r))
            | (RewriteRule::CoRegEmptyLeft, I::CoReg(_, l, r))
                if l.is_empty() =>
            {
                Some(r.as_ref().clone())
            }
            (RewriteRule::StrictEmptyRight, I::Strict(l, r))
            | (RewriteRule::CoRegEmptyRight, I::CoReg(_, l, r))
                if r.is_empty() =>
            {
                Some(l.as_ref().clone())
            }
            (RewriteRule::AltEmptyLoop, I::Alt(l, r))
                if l.is_empty() && matches!(r.as_ref(), I::LoopS(_)) =>
            {
                Some(r.as_ref().clone())
            }
            (RewriteRule::AltLoopEmpty, I::Alt(l, r))
                if r.is_empty() && matches!(l.as_ref(), I::LoopS(_)) =>
            {
                Some(l.as_ref().clone())
            }
            (RewriteRule::AltEmptyEmpty, I::Alt(l, r)) if l.is_empty() && r.is_empty() => {
                Some(I::Empty)
            }
            (RewriteRule::LoopEmpty, I::LoopS(body)) if body.is_empty() => Some(I::Empty),
            _ => None,
        }
    }
}

/// Rules matching at the root of `term`.
pub fn root_redexes(term: &Interaction) -> impl Iterator<Item = RewriteRule> + '_ {
    RewriteRule::ALL
        .into_iter()
        .filter(move |rule| rule.apply(term).is_some())
}

/// How [`rewrite_once`] picks among several redexes.
pub enum PositionChoice<'a, R: Rng> {
    /// The first redex in pre-order, first matching rule.
    Deterministic,
    /// A uniformly random (position, rule) redex.
    Random(&'a mut R),
}

/// A position in a term: the child indices (0-based) from the root.
pub type Position = Vec<u8>;

/// Every (position, rule) redex of `term`, in pre-order.
pub fn redexes(term: &Interaction) -> Vec<(Position, RewriteRule)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_redexes(term, &mut path, &mut out);
    out
}

fn collect_redexes(
    term: &Interaction,
    path: &mut Position,
    out: &mut Vec<(Position, RewriteRule)>,
) {
    for rule in root_redexes(term) {
        out.push((path.clone(), rule));
    }
    for (k, child) in children(term).into_iter().enumerate() {
        path.push(k as u8);
        collect_redexes(child, path, out);
        path.pop();
    }
}

fn children(term: &Interaction) -> Vec<&Interaction> {
    match term {
        Interaction::Empty | Interaction::Act(_) => Vec::new(),
        Interaction::Strict(l, r) | Interaction::Alt(l, r) | Interaction::CoReg(_, l, r) => {
            vec![l.as_ref(), r.as_ref()]
        }
        Interaction::LoopS(body) => vec![body.as_ref()],
    }
}

/// Replaces the sub-term at `pos` by `f(sub-term)`.
fn replace_at<F>(term: &Interaction, pos: &[u8], f: F) -> Interaction
where
    F: FnOnce(&Interaction) -> Interaction,
{
    let Some((&k, rest)) = pos.split_first() else {
        return f(term);
    };
    match term {
        Interaction::Strict(l, r) if k == 0 => {
            Interaction::Strict(Arc::new(replace_at(l, rest, f)), Arc::clone(r))
        }
        Interaction::Strict(l, r) => {
            Interaction::Strict(Arc::clone(l), Arc::new(replace_at(r, rest, f)))
        }
        Interaction::Alt(l, r) if k == 0 => {
            Interaction::Alt(Arc::new(replace_at(l, rest, f)), Arc::clone(r))
        }
        Interaction::Alt(l, r) => Interaction::Alt(Arc::clone(l), Arc::new(replace_at(r, rest, f))),
        Interaction::CoReg(lfs, l, r) if k == 0 => {
            Interaction::CoReg(*lfs, Arc::new(replace_at(l, rest, f)), Arc::clone(r))
        }
        Interaction::CoReg(lfs, l, r) => {
            Interaction::CoReg(*lfs, Arc::clone(l), Arc::new(replace_at(r, rest, f)))
        }
        Interaction::LoopS(body) => Interaction::LoopS(Arc::new(replace_at(body, rest, f))),
        Interaction::Empty | Interaction::Act(_) => panic!("position outside of term"),
    }
}

/// A single rewrite step at one redex, or `None` if `term` is irreducible.
pub fn rewrite_once<R: Rng>(
    term: &Interaction,
    choice: PositionChoice<'_, R>,
) -> Option<Interaction> {
    let found = redexes(term);
    if found.is_empty() {
        return None;
    }
    let (pos, rule) = match choice {
        PositionChoice::Deterministic => &found[0],
        PositionChoice::Random(rng) => &found[rng.gen_range(0..found.len())],
    };
    Some(replace_at(term, pos, |sub| {
        rule.apply(sub).expect("redex was matched")
    }))
}

/// Whether no sub-term matches a rule.
pub fn is_normal_form(term: &Interaction) -> bool {
    root_redexes(term).next().is_none() && children(term).into_iter().all(is_normal_form)
}

/// The unique normal form of `term`.
pub fn simplify(term: &Interaction) -> Interaction {
    simplify_inner(term).unwrap_or_else(|| term.clone())
}

/// `None` when the term is already in normal form.
fn simplify_inner(term: &Interaction) -> Option<Interaction> {
    use Interaction as I;
    match term {
        I::Empty | I::Act(_) => None,
        I::LoopS(body) => {
            let new_body = simplify_inner(body);
            let body_ref = new_body.as_ref().unwrap_or(body);
            if body_ref.is_empty() {
                return Some(I::Empty);
            }
            new_body.map(|b| I::LoopS(Arc::new(b)))
        }
        I::Strict(l, r) | I::Alt(l, r) | I::CoReg(_, l, r) => {
            let nl = simplify_inner(l);
            let nr = simplify_inner(r);
            let lref = nl.as_ref().unwrap_or(l);
            let rref = nr.as_ref().unwrap_or(r);
            match term {
                I::Strict(..) | I::CoReg(..) => {
                    if lref.is_empty() {
                        return Some(rref.clone());
                    }
                    if rref.is_empty() {
                        return Some(lref.clone());
                    }
                }
                _ => match (lref, rref) {
                    (I::Empty, I::Empty) => return Some(I::Empty),
                    (I::Empty, I::LoopS(_)) => return Some(rref.clone()),
                    (I::LoopS(_), I::Empty) => return Some(lref.clone()),
                    _ => {}
                },
            }
            if nl.is_none() && nr.is_none() {
                return None;
            }
            let left = nl.map(Arc::new).unwrap_or_else(|| Arc::clone(l));
            let right = nr.map(Arc::new).unwrap_or_else(|| Arc::clone(r));
            Some(match term {
                I::Strict(..) => I::Strict(left, right),
                I::Alt(..) => I::Alt(left, right),
                I::CoReg(lfs, ..) => I::CoReg(*lfs, left, right),
                _ => unreachable!(),
            })
        }
    }
}
