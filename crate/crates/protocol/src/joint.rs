//! Joint uniform sampling: each player broadcasts a private uniform
//! contribution and everyone combines what was delivered. A missing or
//! malformed contribution counts as 0.

use mediatorless_game::Rational;
use mediatorless_net::{bracha::broadcast_sync, AdversaryScript, Body};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ProtocolError;

/// Contributions of the fractional variant are `FRACTION_BITS`-bit binary
/// fractions.
pub const FRACTION_BITS: u32 = 32;

/// A value uniform in `[1, modulus]` whenever one contributor is honest.
pub fn joint_uniform_sample(
    n: usize,
    k: usize,
    modulus: u64,
    script: &AdversaryScript,
    seed: u64,
) -> Result<u64, ProtocolError> {
    if modulus == 0 {
        return Err(ProtocolError::Params("modulus must be positive".into()));
    }
    let sum = combine(n, k, script, seed, |rng| rng.gen_range(1..=modulus), |v| {
        if (1..=modulus).contains(&v) { v % modulus } else { 0 }
    }, |a, b| (a + b) % modulus)?;
    Ok(if sum == 0 { modulus } else { sum })
}

/// A value uniform over the binary fractions in `[0, 1)` with
/// `FRACTION_BITS` bits, whenever one contributor is honest.
pub fn joint_uniform_fraction(n: usize, k: usize, script: &AdversaryScript, seed: u64) -> Result<Rational, ProtocolError> {
    let span = 1u64 << FRACTION_BITS;
    let sum = combine(n, k, script, seed, |rng| rng.gen_range(0..span), |v| if v < span { v } else { 0 }, |a, b| {
        (a + b) % span
    })?;
    Ok(Rational::new(sum.into(), span.into()))
}

fn combine(
    n: usize,
    k: usize,
    script: &AdversaryScript,
    seed: u64,
    draw: impl Fn(&mut ChaCha8Rng) -> u64,
    accept: impl Fn(u64) -> u64,
    add: impl Fn(u64, u64) -> u64,
) -> Result<u64, ProtocolError> {
    if n == 0 || n <= 3 * k {
        return Err(ProtocolError::Params(format!("need n > 3k, got n = {n}, k = {k}")));
    }
    if script.coalition.len() > k {
        return Err(ProtocolError::Broadcast(format!(
            "{} corrupted players exceed the fault bound {k}",
            script.coalition.len()
        )));
    }
    let inputs: Vec<Option<Body>> = (0..n)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            Some(vec![draw(&mut rng)])
        })
        .collect();
    let views = broadcast_sync(k, inputs, script.clone(), seed)?;
    let mut agreed: Option<u64> = None;
    for (i, view) in views.iter().enumerate() {
        if script.is_corrupt(i) {
            continue;
        }
        let total = view.iter().fold(0, |acc, b| match b.as_deref() {
            Some(&[v]) => add(acc, accept(v)),
            _ => acc,
        });
        match agreed {
            Some(prev) if prev != total => {
                return Err(ProtocolError::Broadcast(format!("honest players disagree: {prev} vs {total}")));
            }
            _ => agreed = Some(total),
        }
    }
    agreed.ok_or_else(|| ProtocolError::Broadcast("no honest player".into()))
}
