use mediatorless_game::{expected_utility, CorrelatedProfile, GameSpec, StrategyProfile};

use crate::checks::{check_k_bayesian_nash_with, CheckOptions};
use crate::{EqError, ResilienceMode};

/// First pure profile (odometer order over each player's type-to-action map,
/// player 0 most significant) that is a k-resilient Bayesian Nash equilibrium
/// and strictly worse than `mu` for every player.
pub fn find_punishment_equilibrium(
    game: &GameSpec,
    mu: &CorrelatedProfile,
    k: usize,
    opts: &CheckOptions,
) -> Result<Option<StrategyProfile>, EqError> {
    mu.check(game)?;
    let n = game.players();
    let tsizes = game.types().sizes();
    let asizes = game.actions().sizes();
    // one digit per (player, type)
    let radix: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat(asizes[i]).take(tsizes[i])).collect();
    let total = radix
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX);
    if total > opts.budget {
        return Err(EqError::TooLarge { needed: total, budget: opts.budget });
    }
    let target: Vec<_> =
        (0..n).map(|i| expected_utility(game, mu, i)).collect::<Result<_, _>>()?;
    let mut digits = vec![0usize; radix.len()];
    loop {
        let profile = StrategyProfile::pure(game, |i, t| {
            let offset: usize = tsizes[..i].iter().sum();
            digits[offset + t]
        });
        let corr = profile.to_correlated(game);
        let mut worse = true;
        for (i, u) in target.iter().enumerate() {
            if expected_utility(game, &corr, i)? >= *u {
                worse = false;
                break;
            }
        }
        if worse
            && check_k_bayesian_nash_with(game, &profile, k, ResilienceMode::Resilient, opts)?
                .is_pass()
        {
            return Ok(Some(profile));
        }
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < radix[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
}
