//! Interaction terms, their signature and the structural operational semantics.
//!
//! An interaction is a ground term over the empty interaction, atomic
//! communication actions, strict sequencing, choice, co-regions and strictly
//! sequential loops. Weak sequencing (`seq`) and interleaving (`par`) are the
//! co-regions over no lifeline and over every lifeline respectively, so they
//! have no constructor of their own.

mod semantics;

pub use semantics::{
    accepts_empty, cannot_express, enumerate_traces, evades, next_steps, prune, BoundExceeded,
    DEFAULT_ENUMERATION_CAP,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub type LifelineId = u16;
pub type MessageId = u16;

/// Maximum number of lifelines a [`Signature`] may declare.
pub const MAX_LIFELINES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("empty {0} name")]
    EmptyName(&'static str),
    #[error("invalid {kind} name `{name}`")]
    InvalidName { kind: &'static str, name: String },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("at most {MAX_LIFELINES} lifelines are supported, got {0}")]
    TooManyLifelines(usize),
    #[error("too many messages: {0}")]
    TooManyMessages(usize),
    #[error("unknown lifeline `{0}`")]
    UnknownLifeline(String),
    #[error("unknown message `{0}`")]
    UnknownMessage(String),
    #[error("malformed action `{0}`, expected `lifeline!message` or `lifeline?message`")]
    MalformedAction(String),
}

/// Words that cannot be used as lifeline or message names.
pub const RESERVED_WORDS: &[&str] = &[
    "strict",
    "seq",
    "alt",
    "par",
    "loopS",
    "coreg",
    "lifelines",
    "messages",
];

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Declared lifelines and messages. Induces the action alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    lifelines: Vec<String>,
    messages: Vec<String>,
    lifeline_ids: HashMap<String, LifelineId>,
    message_ids: HashMap<String, MessageId>,
}

impl Signature {
    pub fn new<L, M>(lifelines: L, messages: M) -> Result<Self, SignatureError>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let lifelines: Vec<String> = lifelines.into_iter().map(Into::into).collect();
        let messages: Vec<String> = messages.into_iter().map(Into::into).collect();
        if lifelines.len() > MAX_LIFELINES {
            return Err(SignatureError::TooManyLifelines(lifelines.len()));
        }
        if messages.len() > MessageId::MAX as usize {
            return Err(SignatureError::TooManyMessages(messages.len()));
        }
        let lifeline_ids = index_names("lifeline", &lifelines)?;
        let message_ids = index_names("message", &messages)?;
        Ok(Signature {
            lifelines,
            messages,
            lifeline_ids,
            message_ids,
        })
    }

    pub fn lifelines(&self) -> &[String] {
        &self.lifelines
    }

    pub fn messages(&self) -> &[String] {
        &self.messages
    }

    pub fn lifeline_id(&self, name: &str) -> Option<LifelineId> {
        self.lifeline_ids.get(name).copied()
    }

    pub fn message_id(&self, name: &str) -> Option<MessageId> {
        self.message_ids.get(name).copied()
    }

    pub fn lifeline_name(&self, id: LifelineId) -> &str {
        &self.lifelines[id as usize]
    }

    pub fn message_name(&self, id: MessageId) -> &str {
        &self.messages[id as usize]
    }

    /// The set `L` of every declared lifeline.
    pub fn all_lifelines(&self) -> LifelineSet {
        LifelineSet::first_n(self.lifelines.len())
    }

    /// Every action `l!m` and `l?m`, sorted. Has `|L| * 2 * |M|` elements.
    pub fn alphabet(&self) -> Vec<Action> {
        let mut actions = Vec::with_capacity(self.lifelines.len() * 2 * self.messages.len());
        for l in 0..self.lifelines.len() {
            for direction in [Direction::Emission, Direction::Reception] {
                for m in 0..self.messages.len() {
                    actions.push(Action::new(l as LifelineId, direction, m as MessageId));
                }
            }
        }
        actions
    }

    pub fn contains_action(&self, action: Action) -> bool {
        (action.lifeline as usize) < self.lifelines.len()
            && (action.message as usize) < self.messages.len()
    }

    /// Parses a single `lifeline!message` / `lifeline?message` token.
    pub fn parse_action(&self, token: &str) -> Result<Action, SignatureError> {
        let split = token
            .find(['!', '?'])
            .ok_or_else(|| SignatureError::MalformedAction(token.to_owned()))?;
        let (lifeline, rest) = token.split_at(split);
        let direction = if rest.starts_with('!') {
            Direction::Emission
        } else {
            Direction::Reception
        };
        let message = &rest[1..];
        if !is_identifier(lifeline) || !is_identifier(message) {
            return Err(SignatureError::MalformedAction(token.to_owned()));
        }
        let lifeline = self
            .lifeline_id(lifeline)
            .ok_or_else(|| SignatureError::UnknownLifeline(lifeline.to_owned()))?;
        let message = self
            .message_id(message)
            .ok_or_else(|| SignatureError::UnknownMessage(message.to_owned()))?;
        Ok(Action::new(lifeline, direction, message))
    }

    pub fn parse_trace(&self, text: &str) -> Result<Trace, SignatureError> {
        text.split_whitespace()
            .map(|token| self.parse_action(token))
            .collect()
    }

    pub fn action_name(&self, action: Action) -> String {
        format!(
            "{}{}{}",
            self.lifeline_name(action.lifeline),
            action.direction.symbol(),
            self.message_name(action.message)
        )
    }

    pub fn trace_text(&self, trace: &[Action]) -> String {
        let tokens: Vec<String> = trace.iter().map(|a| self.action_name(*a)).collect();
        tokens.join(" ")
    }

    pub fn lifeline_set<'a, I>(&self, names: I) -> Result<LifelineSet, SignatureError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = LifelineSet::EMPTY;
        for name in names {
            let id = self
                .lifeline_id(name)
                .ok_or_else(|| SignatureError::UnknownLifeline(name.to_owned()))?;
            set = set.with(id);
        }
        Ok(set)
    }
}

fn index_names(
    kind: &'static str,
    names: &[String],
) -> Result<HashMap<String, u16>, SignatureError> {
    let mut ids = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if name.is_empty() {
            return Err(SignatureError::EmptyName(kind));
        }
        if !is_identifier(name) || RESERVED_WORDS.contains(&name.as_str()) {
            return Err(SignatureError::InvalidName {
                kind,
                name: name.clone(),
            });
        }
        if ids.insert(name.clone(), i as u16).is_some() {
            return Err(SignatureError::Duplicate {
                kind,
                name: name.clone(),
            });
        }
    }
    Ok(ids)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Emission,
    Reception,
}

impl Direction {
    pub fn symbol(self) -> char {
        match self {
            Direction::Emission => '!',
            Direction::Reception => '?',
        }
    }
}

/// An atomic emission `l!m` or reception `l?m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub lifeline: LifelineId,
    pub direction: Direction,
    pub message: MessageId,
}

impl Action {
    pub const fn new(lifeline: LifelineId, direction: Direction, message: MessageId) -> Self {
        Action {
            lifeline,
            direction,
            message,
        }
    }

    pub const fn emission(lifeline: LifelineId, message: MessageId) -> Self {
        Action::new(lifeline, Direction::Emission, message)
    }

    pub const fn reception(lifeline: LifelineId, message: MessageId) -> Self {
        Action::new(lifeline, Direction::Reception, message)
    }

    /// The lifeline the action occurs on.
    pub fn lifeline(self) -> LifelineId {
        self.lifeline
    }
}

/// A finite sequence of actions.
pub type Trace = Vec<Action>;

/// A set of lifelines, stored as a bit mask. Equality is set equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LifelineSet(u64);

impl LifelineSet {
    pub const EMPTY: LifelineSet = LifelineSet(0);
    /// Contains every possible lifeline id; acts as `L` for any signature.
    pub const FULL: LifelineSet = LifelineSet(u64::MAX);

    pub fn first_n(n: usize) -> Self {
        if n >= 64 {
            LifelineSet(u64::MAX)
        } else {
            LifelineSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(id: LifelineId) -> Self {
        LifelineSet::EMPTY.with(id)
    }

    pub fn with(self, id: LifelineId) -> Self {
        LifelineSet(self.0 | (1u64 << id))
    }

    pub fn contains(self, id: LifelineId) -> bool {
        (id as u32) < 64 && self.0 & (1u64 << id) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn minus(self, other: LifelineSet) -> Self {
        LifelineSet(self.0 & !other.0)
    }

    pub fn union(self, other: LifelineSet) -> Self {
        LifelineSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: LifelineSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = LifelineId> {
        (0..64u16).filter(move |&i| self.contains(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
}

impl fmt::Debug for LifelineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<LifelineId> for LifelineSet {
    fn from_iter<T: IntoIterator<Item = LifelineId>>(iter: T) -> Self {
        iter.into_iter().fold(LifelineSet::EMPTY, LifelineSet::with)
    }
}

/// An interaction term. Children are reference counted so that successor
/// terms share structure with their source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interaction {
    Empty,
    Act(Action),
    Strict(Arc<Interaction>, Arc<Interaction>),
    Alt(Arc<Interaction>, Arc<Interaction>),
    CoReg(LifelineSet, Arc<Interaction>, Arc<Interaction>),
    LoopS(Arc<Interaction>),
}

impl Interaction {
    pub fn act(action: Action) -> Self {
        Interaction::Act(action)
    }

    pub fn strict(left: Interaction, right: Interaction) -> Self {
        Interaction::Strict(Arc::new(left), Arc::new(right))
    }

    pub fn alt(left: Interaction, right: Interaction) -> Self {
        Interaction::Alt(Arc::new(left), Arc::new(right))
    }

    pub fn coreg(lifelines: LifelineSet, left: Interaction, right: Interaction) -> Self {
        Interaction::CoReg(lifelines, Arc::new(left), Arc::new(right))
    }

    /// Weak sequencing, the co-region over no lifeline.
    pub fn seq(left: Interaction, right: Interaction) -> Self {
        Interaction::coreg(LifelineSet::EMPTY, left, right)
    }

    /// Interleaving, the co-region over every lifeline `all` of the signature.
    pub fn par(all: LifelineSet, left: Interaction, right: Interaction) -> Self {
        Interaction::coreg(all, left, right)
    }

    pub fn loop_s(body: Interaction) -> Self {
        Interaction::LoopS(Arc::new(body))
    }

    /// Right-associative fold of a binary operator over `items`.
    /// Returns [`Interaction::Empty`] for an empty list.
    pub fn fold_right<F>(items: Vec<Interaction>, op: F) -> Interaction
    where
        F: Fn(Interaction, Interaction) -> Interaction,
    {
        let mut iter = items.into_iter().rev();
        let Some(last) = iter.next() else {
            return Interaction::Empty;
        };
        iter.fold(last, |acc, item| op(item, acc))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interaction::Empty)
    }

    pub fn node_count(&self) -> usize {
        match self {
            Interaction::Empty | Interaction::Act(_) => 1,
            Interaction::Strict(l, r) | Interaction::Alt(l, r) | Interaction::CoReg(_, l, r) => {
                1 + l.node_count() + r.node_count()
            }
            Interaction::LoopS(body) => 1 + body.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Interaction::Empty | Interaction::Act(_) => 1,
            Interaction::Strict(l, r) | Interaction::Alt(l, r) | Interaction::CoReg(_, l, r) => {
                1 + l.depth().max(r.depth())
            }
            Interaction::LoopS(body) => 1 + body.depth(),
        }
    }

    /// Collects every action occurring in the term.
    pub fn actions(&self, out: &mut Vec<Action>) {
        match self {
            Interaction::Empty => {}
            Interaction::Act(a) => out.push(*a),
            Interaction::Strict(l, r) | Interaction::Alt(l, r) | Interaction::CoReg(_, l, r) => {
                l.actions(out);
                r.actions(out);
            }
            Interaction::LoopS(body) => body.actions(out),
        }
    }

    /// Checks that every action and co-region refers to declared names.
    pub fn is_valid_for(&self, sig: &Signature) -> bool {
        match self {
            Interaction::Empty => true,
            Interaction::Act(a) => sig.contains_action(*a),
            Interaction::Strict(l, r) | Interaction::Alt(l, r) => {
                l.is_valid_for(sig) && r.is_valid_for(sig)
            }
            Interaction::CoReg(lfs, l, r) => {
                lfs.is_subset(sig.all_lifelines()) && l.is_valid_for(sig) && r.is_valid_for(sig)
            }
            Interaction::LoopS(body) => body.is_valid_for(sig),
        }
    }
}
