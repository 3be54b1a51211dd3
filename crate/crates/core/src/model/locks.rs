//! Digital lock benchmark models.
//!
//! A lock on lifeline `l` reads `a`/`b` digits and opens on any input ending
//! with the code followed by a fixed number of arbitrary digits, then emits
//! `l!u`. Networks chain locks: a lock's `u` is received by the locks it
//! enables before they start reading digits.

use std::fmt;
use std::str::FromStr;

use crate::interaction::{Action, Interaction, LifelineId, LifelineSet, MessageId, Signature};

use super::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Digit {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// `n` locks, each enabling the next one.
    Chain(usize),
    /// One lock enabling two concurrent locks, which both enable a last one.
    Diamond4,
    /// 1 → (2 ∥ 3 ∥ 4) → (5 ∥ 6 ∥ 7) → 8, each stage enabling all of the next.
    Diamond8,
}

impl Topology {
    pub fn len(self) -> usize {
        match self {
            Topology::Chain(n) => n,
            Topology::Diamond4 => 4,
            Topology::Diamond8 => 8,
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }

    /// Locks grouped in stages; every lock of a stage is enabled by every
    /// lock of the previous stage.
    pub fn stages(self) -> Vec<Vec<usize>> {
        match self {
            Topology::Chain(n) => (0..n).map(|i| vec![i]).collect(),
            Topology::Diamond4 => vec![vec![0], vec![1, 2], vec![3]],
            Topology::Diamond8 => vec![vec![0], vec![1, 2, 3], vec![4, 5, 6], vec![7]],
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Chain(n) => write!(f, "chain:{n}"),
            Topology::Diamond4 => f.write_str("diamond4"),
            Topology::Diamond8 => f.write_str("diamond8"),
        }
    }
}

impl FromStr for Topology {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "diamond4" => Ok(Topology::Diamond4),
            "diamond8" => Ok(Topology::Diamond8),
            _ => {
                let n = s
                    .strip_prefix("chain:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| {
                        format!("unknown topology `{s}` (expected chain:N, diamond4 or diamond8)")
                    })?;
                if n == 0 {
                    return Err("a chain needs at least one lock".into());
                }
                Ok(Topology::Chain(n))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheduling {
    /// Weak sequencing everywhere; concurrency follows from the lifelines.
    #[default]
    Seq,
    /// Strict sequencing inside and between dependent locks, interleaving
    /// between independent ones. Accepted by `compo`.
    StrictAndPar,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LockSpec {
    pub code: Vec<Digit>,
    pub wildcards: usize,
    pub topology: Topology,
    pub scheduling: Scheduling,
}

impl Default for LockSpec {
    fn default() -> Self {
        LockSpec {
            code: vec![Digit::A, Digit::A, Digit::B],
            wildcards: 3,
            topology: Topology::Chain(1),
            scheduling: Scheduling::Seq,
        }
    }
}

impl LockSpec {
    pub fn new(topology: Topology, scheduling: Scheduling) -> Self {
        LockSpec {
            topology,
            scheduling,
            ..LockSpec::default()
        }
    }
}

const A: MessageId = 0;
const B: MessageId = 1;
const U: MessageId = 2;

struct Builder {
    scheduling: Scheduling,
    all: LifelineSet,
}

impl Builder {
    fn seq(&self, items: Vec<Interaction>) -> Interaction {
        match self.scheduling {
            Scheduling::Seq => Interaction::fold_right(items, Interaction::seq),
            Scheduling::StrictAndPar => Interaction::fold_right(items, Interaction::strict),
        }
    }

    fn par(&self, items: Vec<Interaction>) -> Interaction {
        let all = self.all;
        Interaction::fold_right(items, |l, r| Interaction::par(all, l, r))
    }
}

fn recv(l: LifelineId, m: MessageId) -> Interaction {
    Interaction::act(Action::reception(l, m))
}

fn digit(l: LifelineId) -> Interaction {
    Interaction::alt(recv(l, A), recv(l, B))
}

/// Digit reading of one lock, up to (not including) its unlock emission.
fn code_part(spec: &LockSpec, l: LifelineId) -> Vec<Interaction> {
    let mut items = vec![Interaction::loop_s(digit(l))];
    items.extend(spec.code.iter().map(|d| match d {
        Digit::A => recv(l, A),
        Digit::B => recv(l, B),
    }));
    items.extend((0..spec.wildcards).map(|_| digit(l)));
    items
}

/// Builds the model for `spec`. A single lock uses lifeline `l`; networks use
/// `l1` .. `ln`.
pub fn lock_model(spec: &LockSpec) -> Model {
    let n = spec.topology.len();
    let names: Vec<String> = if n == 1 {
        vec!["l".into()]
    } else {
        (1..=n).map(|i| format!("l{i}")).collect()
    };
    let signature = Signature::new(names, ["a", "b", "u"]).expect("valid lock signature");
    let b = Builder {
        scheduling: spec.scheduling,
        all: signature.all_lifelines(),
    };
    let stages = spec.topology.stages();
    let interaction = match spec.scheduling {
        Scheduling::Seq => seq_network(spec, &b, &stages),
        Scheduling::StrictAndPar => sp_network(spec, &b, &stages),
    };
    Model {
        signature,
        interaction,
    }
}

fn successors(stages: &[Vec<usize>], k: usize) -> &[usize] {
    stages.get(k + 1).map(Vec::as_slice).unwrap_or(&[])
}

/// `seq(C_1, strict(l1!u, l2?u), C_2, ...)` over a topological order.
fn seq_network(spec: &LockSpec, b: &Builder, stages: &[Vec<usize>]) -> Interaction {
    let mut items = Vec::new();
    for (k, stage) in stages.iter().enumerate() {
        for &lock in stage {
            let l = lock as LifelineId;
            items.extend(code_part(spec, l));
            let emit = Interaction::act(Action::emission(l, U));
            let next = successors(stages, k);
            if next.is_empty() {
                items.push(emit);
            } else {
                let receptions = next.iter().map(|&j| recv(j as LifelineId, U)).collect();
                items.push(Interaction::strict(emit, b.seq(receptions)));
            }
        }
    }
    b.seq(items)
}

/// Each lock becomes `strict(receptions, C, emission)`; locks of one stage
/// are interleaved and stages follow each other strictly.
fn sp_network(spec: &LockSpec, b: &Builder, stages: &[Vec<usize>]) -> Interaction {
    let mut parts = Vec::new();
    for (k, stage) in stages.iter().enumerate() {
        let preds = if k == 0 { 0 } else { stages[k - 1].len() };
        let locks = stage
            .iter()
            .map(|&lock| {
                let l = lock as LifelineId;
                let mut items: Vec<Interaction> = (0..preds).map(|_| recv(l, U)).collect();
                items.extend(code_part(spec, l));
                items.push(Interaction::act(Action::emission(l, U)));
                b.seq(items)
            })
            .collect();
        parts.push(b.par(locks));
    }
    b.seq(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::print_term;

    #[test]
    fn single_lock_term() {
        let m = lock_model(&LockSpec::default());
        assert_eq!(
            print_term(&m.signature, &m.interaction),
            "seq(loopS(alt(l?a, l?b)), l?a, l?a, l?b, alt(l?a, l?b), alt(l?a, l?b), \
             alt(l?a, l?b), l!u)"
        );
    }

    #[test]
    fn topology_parsing() {
        assert_eq!("chain:3".parse(), Ok(Topology::Chain(3)));
        assert_eq!("diamond8".parse(), Ok(Topology::Diamond8));
        assert!("chain:0".parse::<Topology>().is_err());
        assert!("ring".parse::<Topology>().is_err());
    }
}
