//! The canonical mediator game: report types, receive a recommendation,
//! act.

use mediatorless_net::{AdversaryScript, SyncNet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{best_response_fallback, OutcomeRecord, ProtocolConfig, ProtocolError};

/// Runs one play with true types `types`. The mediator is party `n`; the
/// script may corrupt players only. Final actions pass through the script
/// under tag `act`; a dropped or invalid action counts as action 0.
pub fn run_mediator_game(
    config: &ProtocolConfig,
    script: &AdversaryScript,
    types: &[usize],
    seed: u64,
) -> Result<OutcomeRecord, ProtocolError> {
    let game = &config.game;
    let n = game.players();
    check_types(config, types)?;
    if script.is_corrupt(n) {
        return Err(ProtocolError::Params("the mediator cannot be corrupted".into()));
    }
    let mut net = SyncNet::new(n + 1, script.clone(), seed)?;
    let mut mediator_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d65_6469_6174_6f72);

    let mut out = vec![vec![None; n + 1]; n + 1];
    for i in 0..n {
        out[i][n] = Some(vec![types[i] as u64]);
    }
    let inbox = net.exchange("report", out);
    let effective: Vec<usize> = (0..n)
        .map(|i| match inbox[n][i].as_deref() {
            Some(&[t]) if (t as usize) < game.types().sizes()[i] => t as usize,
            _ => 0,
        })
        .collect();

    let r = mediator_rng.gen_range(1..=config.modulus());
    let rec = config.recommend(&effective, r);
    let mut out = vec![vec![None; n + 1]; n + 1];
    for i in 0..n {
        out[n][i] = Some(vec![rec[i] as u64]);
    }
    let inbox = net.exchange("recommend", out);
    let recommendations: Vec<Option<usize>> = (0..n)
        .map(|i| match inbox[i][n].as_deref() {
            Some(&[a]) if (a as usize) < game.actions().sizes()[i] => Some(a as usize),
            _ => None,
        })
        .collect();

    let mut record = OutcomeRecord {
        types: types.to_vec(),
        effective_types: effective,
        recommendations: recommendations.clone(),
        actions: Vec::new(),
        payoffs: Vec::new(),
        fallback: vec![false; n],
        flags: Vec::new(),
    };
    let intended: Vec<usize> = (0..n)
        .map(|i| match recommendations[i] {
            Some(a) => a,
            None => {
                record.fallback[i] = true;
                let fb = best_response_fallback(config, i, types[i], types[i], &[]);
                if let Some(note) = fb.note {
                    record.flags.push(format!("player {i}: {note}"));
                }
                fb.action
            }
        })
        .collect();
    record.actions = act(&mut net, config, &intended);
    record.settle(game);
    Ok(record)
}

pub(crate) fn check_types(config: &ProtocolConfig, types: &[usize]) -> Result<(), ProtocolError> {
    if !config.game.types().contains(types) {
        return Err(ProtocolError::Params(format!("type profile {types:?} is outside the game")));
    }
    Ok(())
}

/// Passes intended actions through the script; extra parties send nothing.
pub(crate) fn act(net: &mut SyncNet, config: &ProtocolConfig, intended: &[usize]) -> Vec<usize> {
    let mut out: Vec<Option<Vec<u64>>> = intended.iter().map(|&a| Some(vec![a as u64])).collect();
    out.resize(net.n(), None);
    let sent = net.broadcast("act", out);
    let sizes = config.game.actions().sizes();
    (0..intended.len())
        .map(|i| match sent[i].as_deref() {
            Some(&[a]) if (a as usize) < sizes[i] => a as usize,
            _ => 0,
        })
        .collect()
}
