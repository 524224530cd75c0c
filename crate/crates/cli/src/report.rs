use mediatorless_game::rational::serde_rat_vec;
use mediatorless_game::Rational;
use mediatorless_net::AdversaryScript;
use serde::{Deserialize, Serialize};

use crate::{Assertion, Scenario};

pub const REPORT_SCHEMA: &str = "mediatorless-report-v1";

/// Everything needed to repeat a batch bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub game: String,
    pub mu: String,
    pub players: usize,
    pub k: usize,
    /// Field size `q` of the cheap-talk protocol.
    pub field: Option<u64>,
    /// Range `N` of the shared randomness.
    pub sampler_modulus: Option<u64>,
    pub seed: u64,
    pub runs: u64,
    pub type_profiles: Vec<Vec<usize>>,
    pub adversary: AdversaryScript,
    pub scheduler: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub types: Vec<usize>,
    pub effective_types: Vec<usize>,
    pub actions: Vec<usize>,
    #[serde(with = "serde_rat_vec")]
    pub payoffs: Vec<Rational>,
    /// Whether each player reached an action.
    pub acted: Vec<bool>,
    pub fallback: Vec<bool>,
    pub flags: Vec<String>,
    pub wrong_reconstructions: Vec<usize>,
    /// Element of S the asynchronous mediator sampled from (1-based).
    #[serde(default)]
    pub selected: Option<usize>,
    #[serde(default)]
    pub punished: Vec<bool>,
}

/// Aggregate of the runs for one true type profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub types: Vec<usize>,
    pub runs: u64,
    /// Counts per action-profile index.
    pub counts: Vec<u64>,
    /// The target profile averaged over the runs' effective types.
    #[serde(with = "serde_rat_vec")]
    pub target: Vec<Rational>,
    pub tv: f64,
    /// Players outside the adversary's coalition.
    pub honest: Vec<usize>,
    pub honest_counts: Vec<u64>,
    #[serde(with = "serde_rat_vec")]
    pub honest_target: Vec<Rational>,
    pub honest_tv: f64,
    /// Default tolerance for `honest_tv`.
    pub tolerance: f64,
    #[serde(with = "serde_rat_vec")]
    pub mean_payoffs: Vec<Rational>,
    pub all_honest_acted: bool,
    pub wrong_reconstructions: u64,
    pub flagged_runs: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssertionOutcome {
    pub assertion: Assertion,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub version: String,
    pub name: String,
    pub scenario: Scenario,
    pub parameters: Parameters,
    /// Per-run records; empty when recording was turned off.
    pub runs: Vec<RunRecord>,
    pub profiles: Vec<ProfileSummary>,
    pub assertions: Vec<AssertionOutcome>,
    pub passed: bool,
}
