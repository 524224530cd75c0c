use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::BeliefError;

/// An honest synchronous protocol as a family of state machines.
///
/// A player's state summarizes its local history: its coin and everything
/// it has received. Because the coin is drawn before any message is sent,
/// the honest message on each edge is a function of the sender's state.
pub trait Protocol: Sync {
    fn name(&self) -> &str;
    fn players(&self) -> usize;
    fn rounds(&self) -> usize;
    /// Coins are uniform in `[0, coins)`.
    fn coins(&self) -> u64;
    /// Messages are values in `[0, alphabet)`.
    fn alphabet(&self) -> u64;
    /// Edges `(from, to)` used in `round` (1-based), in canonical order.
    fn edges(&self, round: usize) -> Vec<(usize, usize)>;
    fn init(&self, player: usize, coin: u64) -> u64;
    fn message(&self, player: usize, state: u64, round: usize, to: usize) -> u64;
    /// `received` holds `(from, value)` for the edges into `player` that
    /// delivered this round, in edge order.
    fn update(&self, player: usize, state: u64, round: usize, received: &[(usize, u64)]) -> u64;
    /// Terminal action read off the final state.
    fn action(&self, _player: usize, state: u64) -> u64 {
        state
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Message {
    pub from: usize,
    pub to: usize,
    pub value: u64,
}

/// Every player's coin and every message, by round.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GlobalHistory {
    pub players: usize,
    pub coins: Vec<u64>,
    /// `rounds[r]` lists round `r + 1` in the protocol's edge order.
    pub rounds: Vec<Vec<Message>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalHistory {
    pub player: usize,
    pub coin: u64,
    /// Per round, `(to, value)` sent.
    pub sent: Vec<Vec<(usize, u64)>>,
    /// Per round, `(from, value)` received.
    pub received: Vec<Vec<(usize, u64)>>,
    pub action: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledHistory {
    pub history: GlobalHistory,
    /// `lies[r][e]` flags message `e` of round `r + 1`.
    pub lies: Vec<Vec<bool>>,
}

impl GlobalHistory {
    pub fn local(&self, protocol: &dyn Protocol, player: usize) -> LocalHistory {
        let sent = self.rounds.iter().map(|r| r.iter().filter(|m| m.from == player).map(|m| (m.to, m.value)).collect()).collect();
        let received = self
            .rounds
            .iter()
            .map(|r| r.iter().filter(|m| m.to == player).map(|m| (m.from, m.value)).collect())
            .collect();
        let state = replay(protocol, self, player);
        LocalHistory { player, coin: self.coins[player], sent, received, action: protocol.action(player, state) }
    }

    pub fn actions(&self, protocol: &dyn Protocol) -> Vec<u64> {
        (0..self.players).map(|i| protocol.action(i, replay(protocol, self, i))).collect()
    }
}

fn replay(protocol: &dyn Protocol, h: &GlobalHistory, player: usize) -> u64 {
    let mut s = protocol.init(player, h.coins[player]);
    for (r, msgs) in h.rounds.iter().enumerate() {
        let got: Vec<(usize, u64)> = msgs.iter().filter(|m| m.to == player).map(|m| (m.from, m.value)).collect();
        s = protocol.update(player, s, r + 1, &got);
    }
    s
}

fn validate(protocol: &dyn Protocol, h: &GlobalHistory) -> Result<(), BeliefError> {
    let n = protocol.players();
    if h.players != n || h.coins.len() != n {
        return Err(BeliefError::Malformed(format!("expected {n} players")));
    }
    if let Some(c) = h.coins.iter().find(|&&c| c >= protocol.coins()) {
        return Err(BeliefError::Malformed(format!("coin {c} is outside the coin range")));
    }
    if h.rounds.len() > protocol.rounds() {
        return Err(BeliefError::Malformed(format!("{} rounds exceed the horizon", h.rounds.len())));
    }
    for (r, msgs) in h.rounds.iter().enumerate() {
        let edges = protocol.edges(r + 1);
        if msgs.len() != edges.len() || msgs.iter().zip(&edges).any(|(m, &(f, t))| m.from != f || m.to != t) {
            return Err(BeliefError::Malformed(format!("round {} does not follow the protocol's edges", r + 1)));
        }
        if let Some(m) = msgs.iter().find(|m| m.value >= protocol.alphabet()) {
            return Err(BeliefError::Malformed(format!("value {} is outside the alphabet", m.value)));
        }
    }
    Ok(())
}

/// Flags each message that differs from what its sender's recorded history
/// prescribes.
pub fn label_lies(protocol: &dyn Protocol, h: &GlobalHistory) -> Result<LabeledHistory, BeliefError> {
    validate(protocol, h)?;
    let n = protocol.players();
    let mut states: Vec<u64> = (0..n).map(|i| protocol.init(i, h.coins[i])).collect();
    let mut lies = Vec::with_capacity(h.rounds.len());
    for (r, msgs) in h.rounds.iter().enumerate() {
        let round = r + 1;
        lies.push(msgs.iter().map(|m| m.value != protocol.message(m.from, states[m.from], round, m.to)).collect());
        states = advance(protocol, &states, round, msgs);
    }
    Ok(LabeledHistory { history: h.clone(), lies })
}

pub(crate) fn advance(protocol: &dyn Protocol, states: &[u64], round: usize, msgs: &[Message]) -> Vec<u64> {
    states
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let got: Vec<(usize, u64)> = msgs.iter().filter(|m| m.to == i).map(|m| (m.from, m.value)).collect();
            protocol.update(i, s, round, &got)
        })
        .collect()
}

/// The history every player produces by following the protocol.
pub fn honest_history(protocol: &dyn Protocol, coins: &[u64]) -> GlobalHistory {
    build(protocol, coins.to_vec(), |_, _, honest| honest)
}

/// Random coins; each message is replaced with probability `lie_rate` by a
/// uniformly drawn different value.
pub fn sample_history(protocol: &dyn Protocol, rng: &mut impl Rng, lie_rate: f64) -> GlobalHistory {
    let coins: Vec<u64> = (0..protocol.players()).map(|_| rng.gen_range(0..protocol.coins())).collect();
    let alphabet = protocol.alphabet();
    build(protocol, coins, |_, _, honest| {
        if alphabet > 1 && rng.gen_bool(lie_rate) {
            (honest + rng.gen_range(1..alphabet)) % alphabet
        } else {
            honest
        }
    })
}

/// Runs the protocol, letting `choose(round, edge, honest)` pick each sent
/// value.
pub(crate) fn build(
    protocol: &dyn Protocol,
    coins: Vec<u64>,
    mut choose: impl FnMut(usize, (usize, usize), u64) -> u64,
) -> GlobalHistory {
    let n = protocol.players();
    let mut states: Vec<u64> = (0..n).map(|i| protocol.init(i, coins[i])).collect();
    let mut rounds = Vec::with_capacity(protocol.rounds());
    for round in 1..=protocol.rounds() {
        let msgs: Vec<Message> = protocol
            .edges(round)
            .into_iter()
            .map(|(from, to)| {
                let honest = protocol.message(from, states[from], round, to);
                Message { from, to, value: choose(round, (from, to), honest) }
            })
            .collect();
        states = advance(protocol, &states, round, &msgs);
        rounds.push(msgs);
    }
    GlobalHistory { players: n, coins, rounds }
}
