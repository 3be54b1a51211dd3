mod common;

use std::collections::BTreeSet;

use interaction_nfa::interaction::{Action, Trace};
use interaction_nfa::model::locks::{lock_model, LockSpec, Scheduling, Topology};
use interaction_nfa::model::{parse_model, Model};
use interaction_nfa::nfa::{determinize, equivalent, minimize_dfa, MinimizeAlgorithm, Mode, Nfa};
use interaction_nfa::trace::{analyze_interaction, analyze_nfa, gen_accepted, gen_errors, Outcome};
use interaction_nfa::translate::{build_nfa, compo};

use common::{
    all_words, brute_language, lock_word_ok, naive_accepts, nth_from_last, par_of_emissions,
};

const CAP: usize = 1_000_000;

fn nfa_of(m: &Model, simplified: bool) -> Nfa<Action> {
    build_nfa(&m.signature, &m.interaction, simplified, CAP)
        .unwrap()
        .nfa
}

fn load(name: &str) -> Model {
    let path = format!("{}/../../models/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_model(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn single_lock_matches_its_regular_specification() {
    for scheduling in [Scheduling::Seq, Scheduling::StrictAndPar] {
        let m = lock_model(&LockSpec::new(Topology::Chain(1), scheduling));
        let nfa = build_nfa(&m.signature, &m.interaction, true, CAP)
            .unwrap()
            .nfa;
        let sig = &m.signature;
        let full = sig.alphabet();
        let relevant: Vec<Action> = ["l?a", "l?b", "l!u"]
            .iter()
            .map(|a| sig.parse_action(a).unwrap())
            .collect();
        let words = all_words(&full, 6)
            .into_iter()
            .chain(all_words(&relevant, 11));
        for w in words {
            assert_eq!(
                naive_accepts(&nfa, &w),
                lock_word_ok(&m.signature, &w),
                "{}",
                m.signature.trace_text(&w)
            );
        }
    }
}

#[test]
fn nth_from_last_blowup() {
    for n in 0..=6 {
        let nfa = nth_from_last(n);
        assert_eq!(nfa.num_states(), n + 2);
        let dfa = determinize(&nfa, CAP).unwrap();
        for algo in [MinimizeAlgorithm::Hopcroft, MinimizeAlgorithm::Brzozowski] {
            let min = minimize_dfa(&dfa, algo, CAP).unwrap();
            assert_eq!(min.num_states(), 1 << (n + 1), "n={n} {algo:?}");
        }
        let expected: BTreeSet<Vec<char>> = all_words(&['a', 'b'], n + 3)
            .into_iter()
            .filter(|w| w.len() > n && w[w.len() - n - 1] == 'a')
            .collect();
        assert_eq!(brute_language(&nfa, n + 3), expected);
    }
}

#[test]
fn par_of_emissions_has_one_state_per_subset() {
    for n in 1..=6 {
        let (sig, i) = par_of_emissions(n);
        let t = build_nfa(&sig, &i, true, CAP).unwrap();
        assert_eq!(t.nfa.num_states(), 1 << n);
        // The language is the set of permutations of the n emissions.
        let lang = t.nfa.enumerate_language(n);
        let fact: usize = (1..=n).product();
        assert_eq!(lang.len(), fact);
        assert!(lang
            .iter()
            .all(|w| w.len() == n && common::distinct(w.iter()) == n));
    }
}

#[test]
fn figure5_counts() {
    let m = load("fig5.model");
    let raw = build_nfa(&m.signature, &m.interaction, false, CAP).unwrap();
    let simp = build_nfa(&m.signature, &m.interaction, true, CAP).unwrap();
    assert_eq!(raw.nfa.num_states(), 5);
    assert_eq!(simp.nfa.num_states(), 3);
    assert!(equivalent(&raw.nfa, &simp.nfa, CAP).unwrap());
}

#[test]
fn running_example_automaton() {
    let m = load("running.model");
    let t = build_nfa(&m.signature, &m.interaction, true, CAP).unwrap();
    assert_eq!(t.nfa.num_states(), 9);
    let sig = &m.signature;
    let w = |s: &str| sig.parse_trace(s).unwrap();
    let accepted: [Trace; 3] = [
        w("l1!m1 l2?m1 l3!m2"),
        w("l3!m2 l3!m3 l1!m1 l2?m1 l2?m3"),
        w("l1!m1 l3!m2 l3!m3 l2?m3 l2?m1"),
    ];
    for x in &accepted {
        assert!(naive_accepts(&t.nfa, x), "{}", sig.trace_text(x));
    }
    // l2 is in the co-region, so l2?m3 may precede l2?m1, but its own
    // emission must come first.
    assert!(!naive_accepts(&t.nfa, &w("l1!m1 l2?m3")));
    assert!(!naive_accepts(&t.nfa, &w("l3!m2")));
}

#[test]
fn model_files_translate_consistently() {
    for name in [
        "fig5.model",
        "running.model",
        "running_tree.model",
        "abp.model",
        "lock1.model",
        "lock1_sp.model",
        "diamond4.model",
        "diamond4_sp.model",
    ] {
        let m = load(name);
        let raw = nfa_of(&m, false);
        let simp = nfa_of(&m, true);
        assert!(simp.num_states() <= raw.num_states(), "{name}");
        assert!(equivalent(&raw, &simp, CAP).unwrap(), "{name}");
        if let Ok(c) = compo(&m.signature, &m.interaction) {
            assert!(equivalent(&c, &simp, CAP).unwrap(), "{name}");
        }
    }
}

#[test]
fn generated_model_files_are_current() {
    let cases = [
        ("lock1.model", Topology::Chain(1), Scheduling::Seq),
        (
            "lock1_sp.model",
            Topology::Chain(1),
            Scheduling::StrictAndPar,
        ),
        ("diamond4.model", Topology::Diamond4, Scheduling::Seq),
        (
            "diamond4_sp.model",
            Topology::Diamond4,
            Scheduling::StrictAndPar,
        ),
    ];
    for (name, t, s) in cases {
        let m = lock_model(&LockSpec::new(t, s));
        assert_eq!(load(name), m, "{name}");
    }
}

#[test]
fn unlocking_twice_is_an_error() {
    let m = lock_model(&LockSpec::default());
    let nfa = nfa_of(&m, true);
    let u = m.signature.parse_action("l!u").unwrap();
    let accepted = gen_accepted(&nfa, 20, 7, 15, 11).unwrap();
    for t in accepted {
        assert!(lock_word_ok(&m.signature, &t));
        let mut bad = t.clone();
        bad.push(u);
        for mode in [Mode::Exact, Mode::Prefix] {
            let v = analyze_nfa(&nfa, &bad, mode, None).unwrap();
            assert_eq!(v.outcome, Outcome::Fail);
            assert_eq!(v.consumed, t.len());
            let w = analyze_interaction(&m.signature, &m.interaction, &bad, mode, None).unwrap();
            assert_eq!(w.outcome, Outcome::Fail);
        }
    }
}

#[test]
fn error_traces_extend_accepted_ones() {
    let m = load("abp.model");
    let nfa = nfa_of(&m, true);
    let base = gen_accepted(&nfa, 15, 4, 20, 5).unwrap();
    let errors = gen_errors(&nfa, &base, Mode::Prefix, 6, 64).unwrap();
    for (b, e) in base.iter().zip(&errors) {
        assert!(e.starts_with(b) && e.len() > b.len());
        assert!(naive_accepts(&nfa, b));
        assert!(!naive_accepts(&nfa, e));
    }
    assert_eq!(
        errors,
        gen_errors(&nfa, &base, Mode::Prefix, 6, 64).unwrap()
    );
}
