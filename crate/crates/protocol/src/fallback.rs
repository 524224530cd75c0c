//! Best response of a player that cannot act on a reconstructed
//! recommendation.
//!
//! The player assumes every other player is honest: they shared their true
//! types, and the recommendation was `μ*(t', r)` for the shared profile
//! `t'` and a uniform `r`. Its own shared type may differ from its true
//! type. Received points of its own output sharing are informative once
//! there are more than `k` of them.

use mediatorless_game::Rational;
use mediatorless_sharing::{Point, Poly};
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::ProtocolConfig;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fallback {
    pub action: usize,
    /// Set when the posterior was replaced by the prior.
    pub prior_only: bool,
    pub note: Option<String>,
}

/// Expected-utility argmax, lowest index on ties.
pub fn best_response_fallback(
    config: &ProtocolConfig,
    player: usize,
    true_type: usize,
    shared_type: usize,
    points: &[Point],
) -> Fallback {
    let game = &config.game;
    let choices = game.actions().sizes()[player];
    if choices == 1 {
        return Fallback { action: 0, prior_only: false, note: None };
    }
    let others = game.types().len() / game.types().sizes()[player];
    let posterior_cost = others.saturating_mul(config.modulus() as usize + game.actions().len() * choices);

    let observed = if points.len() > config.k {
        let p = Poly::interpolate(&config.field, points);
        if p.degree() <= config.k {
            Ok(Some(p.constant()))
        } else {
            Err("received points are inconsistent")
        }
    } else {
        Ok(None)
    };
    let note = match observed {
        Err(e) => e,
        Ok(_) if posterior_cost > config.budget => "posterior enumeration exceeds the budget",
        Ok(obs) => {
            if let Some(eu) = posterior(config, player, true_type, shared_type, obs) {
                return Fallback { action: argmax(&eu), prior_only: false, note: None };
            }
            "received points are impossible under honest play"
        }
    };
    prior_only(config, player, true_type, shared_type, note)
}

fn prior_only(config: &ProtocolConfig, player: usize, true_type: usize, shared_type: usize, why: &str) -> Fallback {
    let game = &config.game;
    let choices = game.actions().sizes()[player];
    let others = game.types().len() / game.types().sizes()[player];
    if others.saturating_mul(game.actions().len() * choices) > config.budget {
        return Fallback { action: 0, prior_only: true, note: Some(format!("{why}; prior also exceeds the budget")) };
    }
    let mut eu = vec![Rational::zero(); choices];
    for_each_other(config, player, true_type, shared_type, |t_true, t_shared, prior| {
        for (a, p) in config.mu.dist(t_shared).iter().enumerate() {
            if !p.is_zero() {
                accumulate(config, player, &mut eu, t_true, a, &(prior * p));
            }
        }
    });
    Fallback { action: argmax(&eu), prior_only: true, note: Some(why.to_string()) }
}

/// `None` when every profile consistent with `observed` has probability 0.
fn posterior(
    config: &ProtocolConfig,
    player: usize,
    true_type: usize,
    shared_type: usize,
    observed: Option<u64>,
) -> Option<Vec<Rational>> {
    let game = &config.game;
    let mut eu = vec![Rational::zero(); game.actions().sizes()[player]];
    let mut counts = vec![0u64; game.actions().len()];
    let mut mass = false;
    for_each_other(config, player, true_type, shared_type, |t_true, t_shared, prior| {
        counts.iter_mut().for_each(|c| *c = 0);
        for &a in &config.sampler.table[t_shared] {
            if observed.map_or(true, |v| game.actions().component(a, player) as u64 == v) {
                counts[a] += 1;
            }
        }
        for (a, &c) in counts.iter().enumerate() {
            if c > 0 {
                mass = true;
                accumulate(config, player, &mut eu, t_true, a, &(prior * Rational::from_integer(c.into())));
            }
        }
    });
    mass.then_some(eu)
}

/// Calls `f(true profile, shared profile, prior)` for every `t_{−i}` of
/// positive prior probability.
fn for_each_other(
    config: &ProtocolConfig,
    player: usize,
    true_type: usize,
    shared_type: usize,
    mut f: impl FnMut(usize, usize, &Rational),
) {
    let types = config.game.types();
    for t in types.indices().filter(|&t| types.component(t, player) == true_type) {
        let prior = config.game.prior(t);
        if prior.is_zero() {
            continue;
        }
        let mut shared = types.decode(t);
        shared[player] = shared_type;
        f(t, types.index(&shared), prior);
    }
}

fn accumulate(config: &ProtocolConfig, player: usize, eu: &mut [Rational], t: usize, a: usize, w: &Rational) {
    let actions = config.game.actions();
    let mut profile = actions.decode(a);
    for (b, slot) in eu.iter_mut().enumerate() {
        profile[player] = b;
        *slot += w * config.game.utility(t, actions.index(&profile), player);
    }
}

fn argmax(eu: &[Rational]) -> usize {
    let mut best = 0;
    for (b, v) in eu.iter().enumerate().skip(1) {
        if *v > eu[best] {
            best = b;
        }
    }
    best
}
