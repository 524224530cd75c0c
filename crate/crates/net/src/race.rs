//! A game where the mediator announces whoever reached it first, and a
//! scheduler that rewards players who send twice.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::AdversaryScript;
use crate::asynch::{run_async, AsyncProcess, Ctx, Event, MsgId, RandomPolicy, SchedView, SchedulerPolicy, Watchdog};
use crate::{Body, NetError};

pub const TAG_KNOCK: &str = "race.knock";
pub const TAG_WINNER: &str = "race.winner";

pub enum RaceProcess {
    Player { mediator: usize, copies: usize, sent: bool, action: Option<usize> },
    Mediator { first: Option<usize>, announced: bool },
}

impl AsyncProcess for RaceProcess {
    fn on_schedule(&mut self, ctx: &mut Ctx) {
        match self {
            RaceProcess::Player { mediator, copies, sent, .. } => {
                if !*sent {
                    *sent = true;
                    for _ in 0..*copies {
                        ctx.send(*mediator, TAG_KNOCK, vec![]);
                    }
                }
            }
            RaceProcess::Mediator { first: Some(w), announced } if !*announced => {
                *announced = true;
                for p in 0..ctx.n() - 1 {
                    ctx.send(p, TAG_WINNER, vec![*w as u64]);
                }
            }
            RaceProcess::Mediator { .. } => {}
        }
    }

    fn on_deliver(&mut self, from: usize, body: &Body, _ctx: &mut Ctx) {
        match self {
            RaceProcess::Player { mediator, action, .. } => {
                if from == *mediator && action.is_none() {
                    *action = body.first().map(|&w| w as usize);
                }
            }
            RaceProcess::Mediator { first, .. } => {
                first.get_or_insert(from);
            }
        }
    }

    fn wants_schedule(&self) -> bool {
        matches!(self, RaceProcess::Mediator { first: Some(_), announced: false })
    }
}

/// Schedules players in order, then delivers a lone double-sender's first
/// message before anything else (a random double-sender's if there are
/// several), and everything else in random order.
pub struct RaceExamplePolicy {
    players: usize,
    next: usize,
    favoured: bool,
    rng: ChaCha8Rng,
}

impl RaceExamplePolicy {
    pub fn new(players: usize, seed: u64) -> Self {
        RaceExamplePolicy { players, next: 0, favoured: false, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl SchedulerPolicy for RaceExamplePolicy {
    fn choose(&mut self, view: &SchedView<'_>) -> Event {
        if self.next < self.players {
            self.next += 1;
            return Event::Schedule { process: self.next - 1 };
        }
        if !self.favoured {
            self.favoured = true;
            let mut per_sender: BTreeMap<usize, Vec<MsgId>> = BTreeMap::new();
            for &m in view.pending.iter().filter(|m| m.from < self.players) {
                per_sender.entry(m.from).or_default().push(m);
            }
            let doubles: Vec<&Vec<MsgId>> = per_sender.values().filter(|v| v.len() >= 2).collect();
            if let Some(ms) = doubles.choose(&mut self.rng) {
                return Event::Deliver(*ms.iter().min_by_key(|m| m.seq).expect("nonempty"));
            }
        }
        let wanting: Vec<usize> = (0..view.wanting.len()).filter(|&p| view.wanting[p]).collect();
        let total = view.pending.len() + wanting.len();
        let k = self.rng.gen_range(0..total.max(1));
        match view.pending.get(k) {
            Some(&m) => Event::Deliver(m),
            None => Event::Schedule { process: wanting.get(k - view.pending.len()).copied().unwrap_or(0) },
        }
    }
}

/// Actions played, with each player's will (its own index) filling in when
/// no announcement arrived.
pub fn play_race(
    players: usize,
    double_senders: &[usize],
    policy: &mut dyn SchedulerPolicy,
    seed: u64,
) -> Result<Vec<usize>, NetError> {
    let mut procs: Vec<RaceProcess> = (0..players)
        .map(|i| RaceProcess::Player {
            mediator: players,
            copies: if double_senders.contains(&i) { 2 } else { 1 },
            sent: false,
            action: None,
        })
        .chain(std::iter::once(RaceProcess::Mediator { first: None, announced: false }))
        .collect();
    run_async(&mut procs, policy, &AdversaryScript::none(), seed, Watchdog::default(), 1 << 16)?;
    Ok(procs[..players]
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            RaceProcess::Player { action, .. } => action.unwrap_or(i),
            RaceProcess::Mediator { .. } => unreachable!(),
        })
        .collect())
}

/// 1 for each player whose index is played most often.
pub fn race_payoffs(actions: &[usize]) -> Vec<u8> {
    let n = actions.len();
    let mut freq = vec![0usize; n];
    for &a in actions {
        freq[a] += 1;
    }
    let top = freq.iter().copied().max().unwrap_or(0);
    freq.iter().map(|&f| (f == top) as u8).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RaceReport {
    pub players: usize,
    pub runs: usize,
    /// Win frequency per player, everyone honest, uniform random scheduler.
    pub honest_random: Vec<f64>,
    /// Player 0 sends twice under the example scheduler.
    pub single_deviator: Vec<f64>,
    /// Everyone sends twice under the example scheduler.
    pub all_deviate: Vec<f64>,
}

impl RaceReport {
    /// Expected gain of player 0 from double-sending against the honest
    /// baseline under the same scheduler family.
    pub fn deviator_gain(&self) -> f64 {
        self.single_deviator[0] - self.honest_random[0]
    }
}

fn frequencies(
    players: usize,
    runs: usize,
    seed: u64,
    doubles: &[usize],
    mk: &dyn Fn(u64) -> Box<dyn SchedulerPolicy>,
) -> Result<Vec<f64>, NetError> {
    let mut wins = vec![0usize; players];
    for r in 0..runs {
        let s = seed.wrapping_add(r as u64);
        let actions = play_race(players, doubles, mk(s).as_mut(), s)?;
        for (w, p) in wins.iter_mut().zip(race_payoffs(&actions)) {
            *w += p as usize;
        }
    }
    Ok(wins.into_iter().map(|w| w as f64 / runs as f64).collect())
}

pub fn race_game_demo(players: usize, runs: usize, seed: u64) -> Result<RaceReport, NetError> {
    let all: Vec<usize> = (0..players).collect();
    Ok(RaceReport {
        players,
        runs,
        honest_random: frequencies(players, runs, seed, &[], &|s| Box::new(RandomPolicy::new(s)))?,
        single_deviator: frequencies(players, runs, seed, &[0], &|s| Box::new(RaceExamplePolicy::new(players, s)))?,
        all_deviate: frequencies(players, runs, seed, &all, &|s| Box::new(RaceExamplePolicy::new(players, s)))?,
    })
}
