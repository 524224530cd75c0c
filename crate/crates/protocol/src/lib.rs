//! A mediator game, the cheap-talk protocol that replaces its mediator, and
//! the asynchronous mediator constructions used as references.
//!
//! Types and actions are identified with their indices; type index 0 is
//! the default type ⊥ used whenever a report or a sharing is missing.

mod async_mediator;
mod cheap_talk;
mod config;
mod fallback;
mod joint;
mod mediator;
mod outcome;

pub use async_mediator::{run_async_mediator_game, AsyncMediatorRun, MediatorRule};
pub use cheap_talk::{run_cheap_talk, CheapTalkRun, Phase, PlayerState};
pub use config::{ProtocolConfig, DEFAULT_BUDGET};
pub use fallback::{best_response_fallback, Fallback};
pub use joint::{joint_uniform_sample, joint_uniform_fraction, FRACTION_BITS};
pub use mediator::run_mediator_game;
pub use outcome::OutcomeRecord;

use mediatorless_equilibrium::EqError;
use mediatorless_game::GameError;
use mediatorless_mpc::MpcError;
use mediatorless_net::NetError;
use mediatorless_sharing::ShareError;

#[derive(Debug, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Equilibrium(#[from] EqError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Mpc(#[from] MpcError),
    #[error(transparent)]
    Share(#[from] ShareError),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("broadcast failed: {0}")]
    Broadcast(String),
}
