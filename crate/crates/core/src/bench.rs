//! Lock benchmark rows: measured automaton sizes next to published ones.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::model::locks::{lock_model, LockSpec, Scheduling, Topology};
use crate::nfa::{determinize, equivalent, minimize_dfa, MinimizeAlgorithm, NfaError};
use crate::translate::{build_nfa, compo, CompoError, TranslateError};

/// Counts reported for the reference lock models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReferenceCounts {
    pub nfa_s: usize,
    pub min_dfa: usize,
    pub compo: Option<usize>,
}

pub fn reference_counts(topology: Topology, scheduling: Scheduling) -> Option<ReferenceCounts> {
    let (nfa_s, compo, min_dfa) = match (topology, scheduling) {
        (Topology::Chain(1), Scheduling::Seq) => (8, None, 14),
        (Topology::Chain(1), Scheduling::StrictAndPar) => (8, Some(13), 14),
        (Topology::Diamond4, Scheduling::Seq) => (105, None, 312),
        (Topology::Diamond4, Scheduling::StrictAndPar) => (97, Some(223), 298),
        (Topology::Diamond8, Scheduling::Seq) => (2881, None, 16274),
        (Topology::Diamond8, Scheduling::StrictAndPar) => (1624, Some(5904), 9374),
        _ => return None,
    };
    Some(ReferenceCounts {
        nfa_s,
        min_dfa,
        compo,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    /// Cap for the unsimplified exploration; larger models are reported as
    /// exceeding it.
    pub raw_cap: usize,
    pub state_cap: usize,
    /// Also check `compo` against `nfa_s` by language equivalence.
    pub check_equivalence: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            raw_cap: 200_000,
            state_cap: 1_000_000,
            check_equivalence: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub schema: u32,
    pub topology: String,
    pub scheduling: &'static str,
    pub nfa_s: usize,
    pub nfa_s_time_us: u128,
    /// `None` when the raw exploration exceeded its cap.
    pub nfa_raw: Option<usize>,
    pub min_dfa: usize,
    pub min_dfa_time_us: u128,
    pub compo: Option<usize>,
    pub compo_time_us: Option<u128>,
    pub compo_equivalent: Option<bool>,
    pub paper: Option<ReferenceCounts>,
}

impl BenchRow {
    /// `|Q(nfa_s)| ≤ |Q(nfa)|` and `compo ≡ nfa_s` where measured.
    pub fn consistent(&self) -> bool {
        self.nfa_raw.is_none_or(|raw| self.nfa_s <= raw) && self.compo_equivalent != Some(false)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Compo(#[from] CompoError),
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

fn micros(d: Duration) -> u128 {
    d.as_micros()
}

pub fn bench_lock(
    topology: Topology,
    scheduling: Scheduling,
    options: &BenchOptions,
) -> Result<BenchRow, BenchError> {
    let model = lock_model(&LockSpec::new(topology, scheduling));
    let (sig, i) = (&model.signature, &model.interaction);

    let start = Instant::now();
    let nfa_s = build_nfa(sig, i, true, options.state_cap)?.nfa;
    let nfa_s_time = start.elapsed();

    let nfa_raw = match build_nfa(sig, i, false, options.raw_cap) {
        Ok(t) => Some(t.nfa.num_states()),
        Err(TranslateError::StateCapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let start = Instant::now();
    let dfa = determinize(&nfa_s, options.state_cap)?;
    let min = minimize_dfa(&dfa, MinimizeAlgorithm::Hopcroft, options.state_cap)?;
    let min_time = start.elapsed();

    let (compo_states, compo_time, compo_equivalent) = match scheduling {
        Scheduling::Seq => (None, None, None),
        Scheduling::StrictAndPar => {
            let start = Instant::now();
            let c = compo(sig, i)?;
            let t = start.elapsed();
            let eq = if options.check_equivalence {
                Some(equivalent(&c, &nfa_s, options.state_cap)?)
            } else {
                None
            };
            (Some(c.num_states()), Some(micros(t)), eq)
        }
    };

    Ok(BenchRow {
        schema: 1,
        topology: topology.to_string(),
        scheduling: match scheduling {
            Scheduling::Seq => "seq",
            Scheduling::StrictAndPar => "s&p",
        },
        nfa_s: nfa_s.num_states(),
        nfa_s_time_us: micros(nfa_s_time),
        nfa_raw,
        min_dfa: min.num_states(),
        min_dfa_time_us: micros(min_time),
        compo: compo_states,
        compo_time_us: compo_time,
        compo_equivalent,
        paper: reference_counts(topology, scheduling),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lock_row() {
        let row = bench_lock(
            Topology::Chain(1),
            Scheduling::StrictAndPar,
            &BenchOptions::default(),
        )
        .unwrap();
        assert_eq!((row.nfa_s, row.min_dfa, row.compo), (8, 14, Some(13)));
        assert_eq!(row.compo_equivalent, Some(true));
        assert!(row.consistent());
    }
}
