//! Seeded random interactions and automata for testing and benchmarking.

use rand::Rng;

use crate::interaction::{Action, Direction, Interaction, LifelineSet, Signature};
use crate::nfa::{Nfa, NfaBuilder};

/// Signature `l1..ln` × `m1..mk`.
pub fn small_signature(lifelines: usize, messages: usize) -> Signature {
    Signature::new(
        (1..=lifelines).map(|i| format!("l{i}")),
        (1..=messages).map(|i| format!("m{i}")),
    )
    .expect("generated names are valid")
}

pub fn random_action<R: Rng>(sig: &Signature, rng: &mut R) -> Action {
    let direction = if rng.gen_bool(0.5) {
        Direction::Emission
    } else {
        Direction::Reception
    };
    Action::new(
        rng.gen_range(0..sig.lifelines().len()) as u16,
        direction,
        rng.gen_range(0..sig.messages().len()) as u16,
    )
}

fn random_lifeline_set<R: Rng>(sig: &Signature, rng: &mut R) -> LifelineSet {
    match rng.gen_range(0..4) {
        0 => LifelineSet::EMPTY,
        1 => sig.all_lifelines(),
        _ => (0..sig.lifelines().len() as u16)
            .filter(|_| rng.gen_bool(0.5))
            .collect(),
    }
}

/// A random term of depth at most `max_depth` (a leaf has depth 1).
pub fn random_interaction<R: Rng>(sig: &Signature, max_depth: usize, rng: &mut R) -> Interaction {
    if max_depth <= 1 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.2) {
            Interaction::Empty
        } else {
            Interaction::act(random_action(sig, rng))
        };
    }
    let d = max_depth - 1;
    match rng.gen_range(0..5) {
        0 => Interaction::strict(
            random_interaction(sig, d, rng),
            random_interaction(sig, d, rng),
        ),
        1 => Interaction::alt(
            random_interaction(sig, d, rng),
            random_interaction(sig, d, rng),
        ),
        2 | 3 => Interaction::coreg(
            random_lifeline_set(sig, rng),
            random_interaction(sig, d, rng),
            random_interaction(sig, d, rng),
        ),
        _ => Interaction::loop_s(random_interaction(sig, d, rng)),
    }
}

/// Like [`random_interaction`] but with `∅` appearing often, so that many
/// rewrite redexes occur.
pub fn random_redex_rich<R: Rng>(sig: &Signature, max_depth: usize, rng: &mut R) -> Interaction {
    if max_depth <= 1 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.6) {
            Interaction::Empty
        } else {
            Interaction::act(random_action(sig, rng))
        };
    }
    let d = max_depth - 1;
    match rng.gen_range(0..4) {
        0 => Interaction::strict(
            random_redex_rich(sig, d, rng),
            random_redex_rich(sig, d, rng),
        ),
        1 => Interaction::alt(
            random_redex_rich(sig, d, rng),
            random_redex_rich(sig, d, rng),
        ),
        2 => Interaction::coreg(
            random_lifeline_set(sig, rng),
            random_redex_rich(sig, d, rng),
            random_redex_rich(sig, d, rng),
        ),
        _ => Interaction::loop_s(random_redex_rich(sig, d, rng)),
    }
}

/// A random automaton over `alphabet` with `states` states, each transition
/// present with probability `density`.
pub fn random_nfa<S: Ord + Clone, R: Rng>(
    alphabet: &[S],
    states: usize,
    density: f64,
    rng: &mut R,
) -> Nfa<S> {
    let mut b = NfaBuilder::new(alphabet.iter().cloned());
    for _ in 0..states.max(1) {
        b.add_state(rng.gen_bool(0.3));
    }
    let n = states.max(1) as u32;
    for q in 0..n {
        for c in 0..b.alphabet().len() as u32 {
            for t in 0..n {
                if rng.gen_bool(density) {
                    b.add_transition_id(q, c, t);
                }
            }
        }
    }
    b.build().expect("ids are in range")
}
