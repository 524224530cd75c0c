//! Prime-field arithmetic, Shamir sharing with evaluation points `x = i`
//! (1-based player index), interpolation, and robust reconstruction that
//! tolerates up to `k` wrong shares.

mod decode;
mod field;
mod poly;
mod shamir;

pub use decode::{
    consistent_secrets, decode_berlekamp_welch, decode_subsets, every_subset_agrees,
    robust_reconstruct, Decoded, SUBSET_SEARCH_MAX,
};
pub use field::{is_prime, smallest_prime_above, Field};
pub use poly::Poly;
pub use shamir::{interpolate, share, share_with_coeffs, ShareSet};

/// A point `(x, y)` of a sharing: player `x` holds `y`.
pub type Point = (u64, u64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShareError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("duplicate evaluation point x = {0}")]
    DuplicateX(u64),
    #[error("{have} points supplied, {need} needed")]
    Insufficient { have: usize, need: usize },
    #[error("points {offending:?} disagree with the interpolated polynomial")]
    Inconsistent { offending: Vec<u64> },
    #[error("no degree-{k} polynomial agrees with enough points (more than the tolerated corruptions)")]
    DecodeFailure { k: usize },
}
