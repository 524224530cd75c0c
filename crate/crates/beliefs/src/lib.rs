//! Lie accounting relative to an honest protocol, tremble families, the
//! truthful-variant rewrite, and exhaustive checks that belief limits put
//! no weight on histories where players outside a coalition lie to each
//! other.
//!
//! Checks run on small synchronous protocols given as state machines
//! ([`Protocol`]), so that every global history can be replayed and
//! enumerated.

mod asynch;
mod history;
mod paranoid;
mod toy;
mod variant;
mod weights;

pub use asynch::{async_belief_check, async_view_minimum, Receipt};
pub use history::{
    honest_history, label_lies, sample_history, GlobalHistory, LabeledHistory, LocalHistory, Message, Protocol,
};
pub use paranoid::{
    minimizers, ratio_check, verify_k_paranoid, view_minimum, CoalitionView, MinimizerSet, ParanoidOptions,
    ParanoidReport, RatioCheck, ViewMinimum, ViewVerdict, PARANOID_SCHEMA,
};
pub use toy::{Toy2, Toy3};
pub use variant::truthful_variant;
pub use weights::{
    dominance_bound, lex_compare, lie_probability, lie_sequence, tremble_log_probability, tremble_probability, weight_exponent, LieSequence,
    Tremble,
};

#[derive(Debug, thiserror::Error)]
pub enum BeliefError {
    #[error("malformed history: {0}")]
    Malformed(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{needed} coalition views exceed the budget of {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Game(#[from] mediatorless_game::GameError),
}
