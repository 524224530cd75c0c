use std::cmp::Ordering;

use mediatorless_game::rational::serde_rat;
use mediatorless_game::Rational;
use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::{BeliefError, LabeledHistory, Protocol};

/// Number of lies per round, `(ℓ_1, …, ℓ_R)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LieSequence(pub Vec<u32>);

pub fn lie_sequence(labeled: &LabeledHistory) -> LieSequence {
    LieSequence(labeled.lies.iter().map(|r| r.iter().filter(|&&l| l).count() as u32).collect())
}

/// Lexicographic order, missing positions read as 0.
pub fn lex_compare(a: &LieSequence, b: &LieSequence) -> Ordering {
    let len = a.0.len().max(b.0.len());
    let at = |s: &LieSequence, i: usize| s.0.get(i).copied().unwrap_or(0);
    (0..len).map(|i| at(a, i).cmp(&at(b, i))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

fn inv_pow(base: u64, e: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(base).pow(e as u32))
}

/// `Σ_r ℓ_r (2n)^(−r)`, rounds counted from 1.
pub fn weight_exponent(l: &LieSequence, n: usize) -> Rational {
    let base = 2 * n as u64;
    l.0.iter().enumerate().map(|(r, &c)| Rational::from_integer(c.into()) * inv_pow(base, r + 1)).sum()
}

/// `(2n)^(−r*)·(1 − n·Σ_{r=1}^{len−r*} (2n)^(−r))`: the least weight gap
/// between sequences of length `len` with counts at most `n` that first
/// differ at round `r*`.
pub fn dominance_bound(r_star: usize, len: usize, n: usize) -> Rational {
    let base = 2 * n as u64;
    let tail: Rational = (1..=len.saturating_sub(r_star)).map(|r| inv_pow(base, r)).sum();
    inv_pow(base, r_star) * (Rational::one() - Rational::from_integer(n.into()) * tail)
}

/// `m^(−(2n)^(−r))`, the chance a round-`r` message is replaced.
pub fn lie_probability(m: f64, n: usize, round: usize) -> f64 {
    (-(m.ln()) * (2.0 * n as f64).powi(-(round as i32))).exp()
}

/// Probability of a history under the tremble family, split into the
/// message pattern (in log space: the lie probabilities are irrational) and
/// the honest coin draws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tremble {
    /// Natural log of the product over sends of `1 − p_r` (kept) or
    /// `p_r / (|M| − 1)` (replaced).
    pub log_pattern: f64,
    pub sends: usize,
    pub lies: usize,
    #[serde(with = "serde_rat")]
    pub coins: Rational,
}

impl Tremble {
    pub fn log_total(&self) -> f64 {
        self.log_pattern + mediatorless_game::rational::to_f64(&self.coins).ln()
    }
}

/// A replaced message is drawn uniformly from the values other than the
/// prescribed one, so every lie has mass `1/(|M| − 1)` whatever the
/// history.
pub fn tremble_probability(protocol: &dyn Protocol, labeled: &LabeledHistory, m: f64) -> Result<Tremble, BeliefError> {
    tremble_log_probability(protocol, labeled, m.ln())
}

/// As [`tremble_probability`], taking `ln m` so that indices beyond the
/// range of `f64` can be used.
pub fn tremble_log_probability(
    protocol: &dyn Protocol,
    labeled: &LabeledHistory,
    ln_m: f64,
) -> Result<Tremble, BeliefError> {
    if ln_m.is_nan() || ln_m <= 0.0 {
        return Err(BeliefError::Usage(format!("tremble index must exceed 1 (ln m = {ln_m})")));
    }
    let alphabet = protocol.alphabet();
    if alphabet < 2 {
        return Err(BeliefError::Usage("lying needs at least two message values".into()));
    }
    let n = protocol.players();
    let lie_mass = ((alphabet - 1) as f64).ln();
    let mut log_pattern = 0.0;
    let (mut sends, mut lies) = (0, 0);
    for (r, round) in labeled.lies.iter().enumerate() {
        let x = ln_m * (2.0 * n as f64).powi(-(r as i32 + 1));
        for &lie in round {
            sends += 1;
            if lie {
                lies += 1;
                log_pattern += -x - lie_mass;
            } else {
                log_pattern += (-(-x).exp_m1()).ln();
            }
        }
    }
    let coins = Rational::new(BigInt::one(), BigInt::from(protocol.coins()).pow(n as u32));
    debug_assert!(!coins.is_zero());
    Ok(Tremble { log_pattern, sends, lies, coins })
}
