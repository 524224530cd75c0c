//! Experiment orchestration: loading games, profiles and adversary
//! scripts, running batches of mediator, cheap-talk and asynchronous
//! games, and summarizing them against the target profile.

mod experiment;
mod load;
mod report;
mod stats;

pub use experiment::{run_batch, run_plan, Assertion, Batch, ExperimentPlan, Scenario, TypeSelection, PLAN_SCHEMA};
pub use load::{load_game, load_mu, load_profile, load_script, SchedulerSpec};
pub use report::{AssertionOutcome, Parameters, ProfileSummary, Report, RunRecord, REPORT_SCHEMA};
pub use stats::{default_tolerance, tv_distance};

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("support mismatch: {0}")]
    Support(String),
    #[error(transparent)]
    Game(#[from] mediatorless_game::GameError),
    #[error(transparent)]
    Equilibrium(#[from] mediatorless_equilibrium::EqError),
    #[error(transparent)]
    Protocol(#[from] mediatorless_protocol::ProtocolError),
    #[error(transparent)]
    Net(#[from] mediatorless_net::NetError),
    #[error(transparent)]
    Beliefs(#[from] mediatorless_beliefs::BeliefError),
}

impl HarnessError {
    pub fn file(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        HarnessError::File { path: path.into(), message: message.to_string() }
    }
}
