//! Interaction models to reduced NFA, and trace analysis over both.

pub mod bench;
pub mod interaction;
pub mod model;
pub mod nfa;
pub mod random;
pub mod simplify;
pub mod trace;
pub mod translate;
