//! Exact checkers for coalition-resilient solution concepts, the sampler
//! table used to realize a correlated profile from a shared uniform value,
//! and a search for punishment equilibria.
//!
//! All comparisons are exact. Coalitions are visited by size and then
//! lexicographically, so the first violation found is reproducible.

mod certificate;
mod checks;
pub mod lp;
mod punish;
mod sampler;

pub use certificate::{DeviationCertificate, DeviationKind, Payload, Verdict};
pub use checks::{
    check_k_bayesian_nash, check_k_comm, check_k_correlated, check_k_nash, comm_deviation_gains,
    CheckOptions,
};
pub use punish::find_punishment_equilibrium;
pub use sampler::{build_sampler, SamplerTable};

use serde::{Deserialize, Serialize};

/// Which quantifier a violation needs: resilient means every coalition
/// member strictly gains; strong means at least one does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResilienceMode {
    Resilient,
    Strong,
}

impl ResilienceMode {
    /// True when `gains` (one per member) constitutes a violation.
    pub fn violated(self, gains: &[mediatorless_game::Rational]) -> bool {
        use num::Signed;
        match self {
            ResilienceMode::Resilient => !gains.is_empty() && gains.iter().all(|g| g.is_positive()),
            ResilienceMode::Strong => gains.iter().any(|g| g.is_positive()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EqError {
    #[error(transparent)]
    Game(#[from] mediatorless_game::GameError),
    #[error("{0} expects a normal-form game; use check_k_bayesian_nash for Bayesian games")]
    NotNormalForm(&'static str),
    #[error("instance too large: {needed} evaluations exceed the budget of {budget}")]
    TooLarge { needed: u128, budget: u128 },
    #[error("sampler modulus {0} is too large to tabulate")]
    ModulusTooLarge(String),
}
