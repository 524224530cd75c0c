use mediatorless_game::rational::to_f64;
use mediatorless_game::Rational;
use num::Zero;

use crate::HarnessError;

/// `½ Σ |p̂ − p|` between observed counts and an exact distribution over
/// the same outcomes.
pub fn tv_distance(counts: &[u64], target: &[Rational]) -> Result<f64, HarnessError> {
    if counts.len() != target.len() {
        return Err(HarnessError::Support(format!("{} observed outcomes, {} in the target", counts.len(), target.len())));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(HarnessError::Support("no observations".into()));
    }
    let total_r = Rational::from_integer(total.into());
    let sum: Rational = counts
        .iter()
        .zip(target)
        .map(|(&c, p)| {
            let d = Rational::from_integer(c.into()) / &total_r - p;
            if d < Rational::zero() {
                -d
            } else {
                d
            }
        })
        .sum();
    Ok(to_f64(&sum) / 2.0)
}

/// `4·sqrt(|support| / runs)`.
pub fn default_tolerance(support: usize, runs: u64) -> f64 {
    4.0 * (support as f64 / runs.max(1) as f64).sqrt()
}
