//! Mediator constructions for asynchronous play.
//!
//! In both, each player messages the mediator when first scheduled. The
//! mediator counts how often it has been scheduled; the count at the
//! scheduling where it can first act picks the element of `S` it samples
//! from, so the scheduler chooses among the elements of `S`.

use mediatorless_equilibrium::{build_sampler, SamplerTable};
use mediatorless_game::{CorrelatedProfile, GameSpec, StrategyProfile};
use mediatorless_net::{run_async, AdversaryScript, AsyncProcess, Body, Ctx, SchedulerPolicy, Watchdog};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{OutcomeRecord, ProtocolError};

const MAX_EVENTS: usize = 1 << 16;

pub enum MediatorRule {
    /// Normal-form games: players send an empty message and the mediator
    /// acts on the first one.
    Select { options: Vec<CorrelatedProfile> },
    /// Players report types and the mediator waits for all of them. A
    /// player that never hears back plays its part of `punishment`.
    Collect { options: Vec<CorrelatedProfile>, punishment: StrategyProfile },
}

impl MediatorRule {
    fn options(&self) -> &[CorrelatedProfile] {
        match self {
            MediatorRule::Select { options } | MediatorRule::Collect { options, .. } => options,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AsyncMediatorRun {
    pub outcome: OutcomeRecord,
    /// 1-based index into `S` of the element sampled from, if the
    /// mediator acted.
    pub selected: Option<usize>,
    /// Schedulings of the mediator up to and including the one where it
    /// acted.
    pub schedulings: usize,
    /// Players that received nothing and fell back to the punishment.
    pub punished: Vec<bool>,
    pub events: usize,
}

enum Party<'a> {
    Player { report: Body, sent: bool, action: Option<u64> },
    Mediator(Mediator<'a>),
}

struct Mediator<'a> {
    game: &'a GameSpec,
    samplers: &'a [SamplerTable],
    need_all: bool,
    reports: Vec<Option<usize>>,
    heard: bool,
    schedulings: usize,
    selected: Option<usize>,
    rng: ChaCha8Rng,
}

impl Mediator<'_> {
    fn ready(&self) -> bool {
        if self.need_all {
            self.reports.iter().all(Option::is_some)
        } else {
            self.heard
        }
    }
}

impl AsyncProcess for Party<'_> {
    fn on_schedule(&mut self, ctx: &mut Ctx) {
        match self {
            Party::Player { report, sent, .. } => {
                if !*sent {
                    *sent = true;
                    ctx.send(ctx.n() - 1, "report", report.clone());
                }
            }
            Party::Mediator(m) => {
                if m.selected.is_some() {
                    return;
                }
                m.schedulings += 1;
                if !m.ready() {
                    return;
                }
                let idx = if m.schedulings <= m.samplers.len() { m.schedulings } else { 1 };
                m.selected = Some(idx);
                let sampler = &m.samplers[idx - 1];
                let types: Vec<usize> = m.reports.iter().map(|t| t.unwrap_or(0)).collect();
                let t = m.game.types().index(&types);
                let r = m.rng.gen_range(1..=sampler.modulus);
                let a = m.game.actions().decode(sampler.lookup(t, r));
                for (i, &ai) in a.iter().enumerate() {
                    ctx.send(i, "recommend", vec![ai as u64]);
                }
            }
        }
    }

    fn on_deliver(&mut self, from: usize, body: &Body, ctx: &mut Ctx) {
        match self {
            Party::Player { action, .. } => {
                if from == ctx.n() - 1 && action.is_none() {
                    *action = body.first().copied();
                }
            }
            Party::Mediator(m) => {
                if from >= m.reports.len() {
                    return;
                }
                m.heard = true;
                if m.reports[from].is_none() {
                    let size = m.game.types().sizes()[from];
                    m.reports[from] = Some(match body.as_slice() {
                        &[t] if (t as usize) < size => t as usize,
                        _ => 0,
                    });
                }
            }
        }
    }

    fn wants_schedule(&self) -> bool {
        match self {
            Party::Player { .. } => false,
            Party::Mediator(m) => m.selected.is_none() && m.ready(),
        }
    }
}

/// Plays the game once under `policy`. The mediator is process `n`; the
/// script may corrupt players only.
pub fn run_async_mediator_game(
    game: &GameSpec,
    rule: &MediatorRule,
    types: &[usize],
    policy: &mut dyn SchedulerPolicy,
    script: &AdversaryScript,
    seed: u64,
) -> Result<AsyncMediatorRun, ProtocolError> {
    let n = game.players();
    if !game.types().contains(types) {
        return Err(ProtocolError::Params(format!("type profile {types:?} is outside the game")));
    }
    if rule.options().is_empty() {
        return Err(ProtocolError::Params("S must not be empty".into()));
    }
    if script.is_corrupt(n) {
        return Err(ProtocolError::Params("the mediator cannot be corrupted".into()));
    }
    for mu in rule.options() {
        mu.check(game)?;
    }
    let samplers: Vec<SamplerTable> = rule.options().iter().map(build_sampler).collect::<Result<_, _>>()?;
    let need_all = matches!(rule, MediatorRule::Collect { .. });
    if !need_all && !game.is_normal_form() {
        return Err(ProtocolError::Params("selection by scheduling count needs a normal-form game".into()));
    }

    let mut procs: Vec<Party> = types
        .iter()
        .map(|&t| Party::Player { report: if need_all { vec![t as u64] } else { Vec::new() }, sent: false, action: None })
        .collect();
    procs.push(Party::Mediator(Mediator {
        game,
        samplers: &samplers,
        need_all,
        reports: vec![if need_all { None } else { Some(0) }; n],
        heard: false,
        schedulings: 0,
        selected: None,
        rng: ChaCha8Rng::seed_from_u64(seed ^ 0x6173_796e_6300),
    }));
    let trace = run_async(&mut procs, policy, script, seed, Watchdog::default(), MAX_EVENTS)?;

    let Some(Party::Mediator(m)) = procs.pop() else { unreachable!("mediator is last") };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7075_6e69_7368);
    let sizes = game.actions().sizes();
    let mut outcome = OutcomeRecord {
        types: types.to_vec(),
        effective_types: m.reports.iter().map(|t| t.unwrap_or(0)).collect(),
        recommendations: vec![None; n],
        actions: vec![0; n],
        payoffs: Vec::new(),
        fallback: vec![false; n],
        flags: Vec::new(),
    };
    let mut punished = vec![false; n];
    for (i, p) in procs.iter().enumerate() {
        let Party::Player { action, .. } = p else { unreachable!("players come first") };
        match action.filter(|&a| (a as usize) < sizes[i]) {
            Some(a) => {
                outcome.recommendations[i] = Some(a as usize);
                outcome.actions[i] = a as usize;
            }
            None => {
                punished[i] = true;
                outcome.fallback[i] = true;
                outcome.actions[i] = match rule {
                    MediatorRule::Collect { punishment, .. } => sample(&punishment.strategies[i][types[i]], &mut rng)?,
                    MediatorRule::Select { .. } => {
                        outcome.flags.push(format!("player {i} received no recommendation"));
                        0
                    }
                };
            }
        }
    }
    outcome.settle(game);
    Ok(AsyncMediatorRun { outcome, selected: m.selected, schedulings: m.schedulings, punished, events: trace.events.len() })
}

/// Exact draw from a rational distribution.
fn sample(dist: &[mediatorless_game::Rational], rng: &mut ChaCha8Rng) -> Result<usize, ProtocolError> {
    let table = build_sampler(&CorrelatedProfile::new(vec![dist.to_vec()]))?;
    Ok(table.lookup(0, rng.gen_range(1..=table.modulus)))
}
