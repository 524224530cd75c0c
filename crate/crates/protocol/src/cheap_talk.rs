//! The mediator replaced by cheap talk among the players.
//!
//! 1. Every player VSS-shares its type and a contribution `r_i ∈ [1, N]`.
//! 2. The players evaluate the `μ*` circuit on the shares.
//! 3. Each player sends its share of output `j` to player `j`.
//! 4. A player that shared its true type plays the unique value carried by
//!    at least `2k + 1` consistent received shares; otherwise it plays a
//!    best response.

use mediatorless_mpc::{evaluate_circuit, open_to_each, vss_deal, Mpc, MpcError, MpcEvent, Shares};
use mediatorless_net::{AdversaryScript, Record, SyncNet};
use mediatorless_sharing::{consistent_secrets, Point, Poly};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::mediator::{act, check_types};
use crate::{best_response_fallback, OutcomeRecord, ProtocolConfig, ProtocolError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Sharing,
    Computing,
    Opening,
    Acting,
    Done,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerState {
    pub phase: Phase,
    pub own_type: usize,
    /// Type its sharing fixed, ⊥ if the sharing was disqualified.
    pub shared_type: usize,
    pub type_disqualified: bool,
    pub contribution: u64,
    /// Points of its own output sharing, `x` = sender index + 1.
    pub received: Vec<Point>,
    /// Cleared when the player stops taking part in later phases.
    pub participating: bool,
    pub action: Option<usize>,
    pub from_reconstruction: bool,
}

impl PlayerState {
    fn new(own_type: usize) -> Self {
        PlayerState {
            phase: Phase::Sharing,
            own_type,
            shared_type: 0,
            type_disqualified: false,
            contribution: 0,
            received: Vec::new(),
            participating: true,
            action: None,
            from_reconstruction: false,
        }
    }

    fn advance(&mut self, to: Phase) {
        debug_assert!(to >= self.phase, "phases only move forward");
        self.phase = to;
    }

    fn finish(&mut self, action: usize, reconstructed: bool) {
        assert!(self.action.is_none(), "final action is set once");
        self.action = Some(action);
        self.from_reconstruction = reconstructed;
        self.phase = Phase::Done;
    }
}

#[derive(Clone, Debug)]
pub struct CheapTalkRun {
    pub outcome: OutcomeRecord,
    pub states: Vec<PlayerState>,
    /// Every message, empty unless the config records history.
    pub history: Vec<Record>,
    /// The shared randomness `r` the circuit used.
    pub r: u64,
    /// Recommendations the circuit computed, read off the honest players'
    /// output shares; `None` when evaluation aborted.
    pub circuit_output: Option<Vec<usize>>,
    pub aborted: Option<String>,
    pub events: Vec<MpcEvent>,
    /// Honest players whose reconstructed action differs from the
    /// circuit's output. Always empty when at most `k` players deviate.
    pub wrong_reconstructions: Vec<usize>,
}

pub fn run_cheap_talk(
    config: &ProtocolConfig,
    script: &AdversaryScript,
    types: &[usize],
    seed: u64,
) -> Result<CheapTalkRun, ProtocolError> {
    check_types(config, types)?;
    let game = &config.game;
    let n = game.players();
    let (k, f) = (config.k, config.field);
    let big_n = config.modulus();
    let mut net = SyncNet::new(n, script.clone(), seed)?;
    if config.record_history {
        net = net.recording();
    }
    let mut mpc = Mpc::new(f, k, net, seed)?;
    let honest: Vec<usize> = (0..n).filter(|&i| !mpc.net.is_corrupt(i)).collect();
    let mut states: Vec<PlayerState> = types.iter().map(|&t| PlayerState::new(t)).collect();

    // Phase 1.
    for (i, s) in states.iter_mut().enumerate() {
        s.contribution = if big_n > 1 { mpc.rngs[i].gen_range(1..=big_n) } else { 0 };
    }
    let mut secrets: Vec<(usize, u64)> = (0..n).map(|i| (i, types[i] as u64)).collect();
    if big_n > 1 {
        secrets.extend((0..n).map(|i| (i, states[i].contribution)));
    }
    let dealt = vss_deal(&mut mpc, "p1", &secrets);
    let value_of = |shares: &Shares, item: usize| -> u64 {
        let pts: Vec<Point> = honest.iter().take(k + 1).map(|&i| (i as u64 + 1, shares[i][item])).collect();
        Poly::interpolate(&f, &pts).constant()
    };
    let mut effective = vec![0usize; n];
    for i in 0..n {
        let v = value_of(&dealt.shares, i);
        let s = &mut states[i];
        s.type_disqualified = dealt.disqualified[i];
        s.shared_type = if (v as usize) < game.types().sizes()[i] { v as usize } else { 0 };
        effective[i] = s.shared_type;
        s.advance(Phase::Computing);
    }
    let r = if big_n > 1 {
        let sum: u64 = (0..n)
            .map(|i| value_of(&dealt.shares, n + i))
            .filter(|v| (1..=big_n).contains(v))
            .sum::<u64>()
            % big_n;
        if sum == 0 { big_n } else { sum }
    } else {
        1
    };
    let inputs: Shares = dealt
        .shares
        .iter()
        .map(|row| {
            let mut v = row[..n].to_vec();
            v.extend((0..n).map(|i| if big_n > 1 { row[n + i] } else { 0 }));
            v
        })
        .collect();

    let mut outcome = OutcomeRecord {
        types: types.to_vec(),
        effective_types: effective.clone(),
        recommendations: vec![None; n],
        actions: Vec::new(),
        payoffs: Vec::new(),
        fallback: vec![false; n],
        flags: Vec::new(),
    };

    // Phase 2.
    let (circuit_output, aborted) = match evaluate_circuit(&mut mpc, &config.circuit, &inputs) {
        Ok(out) => {
            let plain: Vec<usize> = (0..n).map(|j| value_of(&out, j) as usize).collect();
            if plain != config.recommend(&effective, r) {
                outcome.flags.push("circuit output differs from the sampler table".into());
            }
            // Phase 3.
            states.iter_mut().for_each(|s| s.advance(Phase::Opening));
            let recipients: Vec<usize> = (0..n).collect();
            let pts = open_to_each(&mut mpc, "p3", &out, &recipients);
            for (s, p) in states.iter_mut().zip(pts) {
                s.received = p;
            }
            (Some(plain), None)
        }
        Err(MpcError::GateAbort(why)) => {
            outcome.flags.push(format!("evaluation aborted: {why}"));
            states.iter_mut().for_each(|s| s.participating = false);
            (None, Some(why))
        }
        Err(e) => return Err(e.into()),
    };

    // Phase 4.
    let mut wrong = Vec::new();
    for i in 0..n {
        let s = &mut states[i];
        s.advance(Phase::Acting);
        let truthful = !s.type_disqualified && s.shared_type == s.own_type;
        let secrets = consistent_secrets(&f, &s.received, k);
        let valid = secrets.len() == 1 && (secrets[0] as usize) < game.actions().sizes()[i];
        if truthful && valid {
            let a = secrets[0] as usize;
            outcome.recommendations[i] = Some(a);
            if honest.contains(&i) && circuit_output.as_ref().is_some_and(|o| o[i] != a) {
                wrong.push(i);
            }
            s.finish(a, true);
            continue;
        }
        if secrets.len() > 1 {
            outcome.flags.push(format!("player {i}: conflicting consistent share sets"));
        }
        outcome.fallback[i] = true;
        let fb = best_response_fallback(config, i, s.own_type, s.shared_type, &s.received);
        if let Some(note) = fb.note {
            outcome.flags.push(format!("player {i}: {note}"));
        }
        s.finish(fb.action, false);
    }
    let intended: Vec<usize> = states.iter().map(|s| s.action.expect("every player acts")).collect();
    outcome.actions = act(&mut mpc.net, config, &intended);
    outcome.settle(game);
    Ok(CheapTalkRun {
        outcome,
        states,
        history: mpc.net.take_transcript(),
        r,
        circuit_output,
        aborted,
        events: std::mem::take(&mut mpc.events),
        wrong_reconstructions: wrong,
    })
}
