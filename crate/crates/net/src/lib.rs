//! Message transport for simulated players.
//!
//! Synchronous runs are lockstep: protocol code computes every player's
//! outgoing messages for a round, [`SyncNet`] passes them through the
//! coalition's adversary script and hands back per-recipient inboxes.
//! Asynchronous runs drive [`AsyncProcess`] state machines under a
//! [`SchedulerPolicy`] that sees message identities but never payloads.

pub mod adversary;
mod asynch;
pub mod bracha;
pub mod consensus;
pub mod race;
mod sync;

pub use adversary::{Action, AdversaryScript, Rule, Trigger, ADVERSARY_SCHEMA};
pub use asynch::{
    run_async, AsyncOutcome, AsyncProcess, Ctx, Event, FifoPolicy, MsgId, RandomPolicy,
    SchedView, SchedulerPolicy, ScriptStep, ScriptedPolicy, Watchdog, DEFAULT_LAG,
};
pub use sync::{run_sync, Record, SyncNet, SyncOutcome};

/// Message payload. Layout is fixed per tag by the protocol that uses it.
pub type Body = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetError {
    #[error("scheduler proposed an invalid event: {0}")]
    Policy(String),
    #[error("run exceeded {0} events without quiescing")]
    EventBudget(usize),
    #[error("invalid adversary script: {0}")]
    Script(String),
}
