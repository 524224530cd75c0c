//! Verifiable secret sharing and share-level arithmetic circuits over a
//! synchronous network.
//!
//! Values are Shamir-shared at degree `k` with player `i` (0-based) holding
//! the evaluation at `x = i + 1`. Share matrices are indexed
//! `[player][item]`; each player's code reads only its own row and inbox.

pub mod battery;
mod bivariate;
mod circuit;
mod gates;
mod lookup;
mod transcript;
mod vss;

pub use bivariate::SymBivariate;
pub use circuit::{evaluate_circuit, Circuit, Gate, Wire};
pub use gates::{gate_add, gate_multiply, open_broadcast, open_to_all, open_to_each, syndrome_weights};
pub use lookup::{build_lookup, LookupLayout};
pub use transcript::{Transcript, TranscriptEntry, TRANSCRIPT_SCHEMA};
pub use vss::{vss_deal, vss_share, VssOutput};

use mediatorless_net::SyncNet;
use mediatorless_sharing::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Per-player shares, `[player][item]`.
pub type Shares = Vec<Vec<u64>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MpcError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("share vectors disagree in shape or field")]
    Mismatch,
    #[error("multiplication aborted: {0}")]
    GateAbort(String),
}

/// Multiplication robustness regime implied by `(n, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `n ≥ 4k + 1`: up to `k` arbitrary liars are corrected.
    Byzantine,
    /// `3k + 1 ≤ n < 4k + 1`: silent players are corrected, lies abort.
    CrashOmission,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MpcEvent {
    Disqualified { step: String, dealer: usize, instance: usize },
    Corrected { gate: usize, dealer: usize },
    GateAbort { gate: usize, reason: String },
}

/// Shared state of one simulated computation.
pub struct Mpc {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub net: SyncNet,
    /// Each player's private randomness.
    pub rngs: Vec<ChaCha8Rng>,
    pub events: Vec<MpcEvent>,
}

impl Mpc {
    pub fn new(field: Field, k: usize, net: SyncNet, seed: u64) -> Result<Self, MpcError> {
        let n = net.n();
        if n <= 3 * k {
            return Err(MpcError::Params(format!("n = {n} must exceed 3k = {}", 3 * k)));
        }
        if n as u64 >= field.modulus() {
            return Err(MpcError::Params(format!("n = {n} must be below the modulus {}", field.modulus())));
        }
        let rngs = (0..n)
            .map(|i| ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_f491_4f6c_dd1d) ^ (i as u64 + 1).rotate_left(29)))
            .collect();
        Ok(Mpc { field, n, k, net, rngs, events: Vec::new() })
    }

    pub fn regime(&self) -> Regime {
        if self.n > 4 * self.k {
            Regime::Byzantine
        } else {
            Regime::CrashOmission
        }
    }
}
