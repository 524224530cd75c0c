//! Asynchronous execution: a scheduler picks, one event at a time, either a
//! pending message to deliver or a process to schedule.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::AdversaryScript;
use crate::{Body, NetError};

/// Obligations older than this many events are forced by the watchdog.
pub const DEFAULT_LAG: usize = 64;

/// Outgoing messages collected during one step of a process.
pub struct Ctx {
    pub(crate) me: usize,
    n: usize,
    pub(crate) out: Vec<(usize, &'static str, Body)>,
}

impl Ctx {
    pub(crate) fn new(me: usize, n: usize) -> Self {
        Ctx { me, n, out: Vec::new() }
    }

    pub fn me(&self) -> usize {
        self.me
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn send(&mut self, to: usize, tag: &'static str, body: Body) {
        self.out.push((to, tag, body));
    }

    /// Sends to every process, including the sender.
    pub fn send_all(&mut self, tag: &'static str, body: Body) {
        for to in 0..self.n {
            self.out.push((to, tag, body.clone()));
        }
    }
}

pub trait AsyncProcess {
    fn on_schedule(&mut self, ctx: &mut Ctx);
    fn on_deliver(&mut self, from: usize, body: &Body, ctx: &mut Ctx);
    /// Whether scheduling this process would let it make progress.
    fn wants_schedule(&self) -> bool {
        false
    }
}

/// Identity of an in-flight message as seen by the scheduler: its sender
/// and global send order. Recipient and payload stay hidden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MsgId {
    pub seq: u64,
    pub from: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Event {
    Deliver(MsgId),
    Schedule { process: usize },
}

pub struct SchedView<'a> {
    /// Pending messages, oldest first.
    pub pending: &'a [MsgId],
    /// Processes that would make progress if scheduled.
    pub wanting: &'a [bool],
    pub step: usize,
}

pub trait SchedulerPolicy {
    fn choose(&mut self, view: &SchedView<'_>) -> Event;
}

/// Oldest pending message first; otherwise round-robin over processes that
/// want to run.
#[derive(Default)]
pub struct FifoPolicy {
    cursor: usize,
}

impl SchedulerPolicy for FifoPolicy {
    fn choose(&mut self, view: &SchedView<'_>) -> Event {
        if let Some(&m) = view.pending.first() {
            return Event::Deliver(m);
        }
        let n = view.wanting.len();
        for k in 0..n {
            let p = (self.cursor + k) % n;
            if view.wanting[p] {
                self.cursor = (p + 1) % n;
                return Event::Schedule { process: p };
            }
        }
        Event::Schedule { process: 0 }
    }
}

/// Uniform over all current obligations.
pub struct RandomPolicy {
    rng: ChaCha8Rng,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        RandomPolicy { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl SchedulerPolicy for RandomPolicy {
    fn choose(&mut self, view: &SchedView<'_>) -> Event {
        let wanting: Vec<usize> = (0..view.wanting.len()).filter(|&p| view.wanting[p]).collect();
        let total = view.pending.len() + wanting.len();
        if total == 0 {
            return Event::Schedule { process: 0 };
        }
        let k = self.rng.gen_range(0..total);
        if k < view.pending.len() {
            Event::Deliver(view.pending[k])
        } else {
            Event::Schedule { process: wanting[k - view.pending.len()] }
        }
    }
}

/// A fixed opening, then FIFO.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScriptStep {
    Schedule { process: usize },
    /// Oldest pending message from `from`.
    DeliverFrom { from: usize },
}

pub struct ScriptedPolicy {
    steps: VecDeque<ScriptStep>,
    fallback: FifoPolicy,
}

impl ScriptedPolicy {
    pub fn new(steps: Vec<ScriptStep>) -> Self {
        ScriptedPolicy { steps: steps.into(), fallback: FifoPolicy::default() }
    }
}


impl SchedulerPolicy for ScriptedPolicy {
    fn choose(&mut self, view: &SchedView<'_>) -> Event {
        while let Some(s) = self.steps.pop_front() {
            match s {
                ScriptStep::Schedule { process } => return Event::Schedule { process },
                ScriptStep::DeliverFrom { from } => {
                    if let Some(&m) = view.pending.iter().find(|m| m.from == from) {
                        return Event::Deliver(m);
                    }
                }
            }
        }
        self.fallback.choose(view)
    }
}

/// Forces any obligation the policy has ignored for more than `lag` events.
#[derive(Clone, Copy, Debug)]
pub struct Watchdog {
    pub lag: usize,
}

impl Default for Watchdog {
    fn default() -> Self {
        Watchdog { lag: DEFAULT_LAG }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsyncOutcome {
    pub events: Vec<Event>,
    pub forced: usize,
    pub delivered: usize,
}

struct InFlight {
    id: MsgId,
    to: usize,
    body: Body,
    since: usize,
}

/// Runs until no message is pending and no process wants to run.
pub fn run_async<P: AsyncProcess>(
    procs: &mut [P],
    policy: &mut dyn SchedulerPolicy,
    script: &AdversaryScript,
    run_seed: u64,
    watchdog: Watchdog,
    max_events: usize,
) -> Result<AsyncOutcome, NetError> {
    let n = procs.len();
    script.validate(n)?;
    let mut rng = script.rng(run_seed);
    let mut pending: Vec<InFlight> = Vec::new();
    let mut seq = 0u64;
    let mut sent_count = vec![0u32; n];
    // Every process is owed a first scheduling.
    let mut started = vec![false; n];
    let mut want_since = vec![Some(0usize); n];
    let mut events = Vec::new();
    let mut forced = 0;
    let mut delivered = 0;

    for step in 0..max_events {
        let wanting: Vec<bool> = (0..n).map(|p| !started[p] || procs[p].wants_schedule()).collect();
        for p in 0..n {
            match (wanting[p], want_since[p]) {
                (true, None) => want_since[p] = Some(step),
                (false, Some(_)) => want_since[p] = None,
                _ => {}
            }
        }
        if pending.is_empty() && !wanting.iter().any(|&w| w) {
            return Ok(AsyncOutcome { events, forced, delivered });
        }
        let oldest_msg = pending.iter().min_by_key(|m| m.since).map(|m| (m.since, Event::Deliver(m.id)));
        let oldest_proc = (0..n)
            .filter_map(|p| want_since[p].map(|s| (s, Event::Schedule { process: p })))
            .min_by_key(|&(s, _)| s);
        let overdue = [oldest_msg, oldest_proc]
            .into_iter()
            .flatten()
            .filter(|&(s, _)| step - s > watchdog.lag)
            .min_by_key(|&(s, _)| s);
        let ids: Vec<MsgId> = pending.iter().map(|m| m.id).collect();
        let ev = match overdue {
            Some((_, e)) => {
                forced += 1;
                e
            }
            None => policy.choose(&SchedView { pending: &ids, wanting: &wanting, step }),
        };
        let mut ctx;
        match ev {
            Event::Deliver(id) => {
                let pos = pending
                    .iter()
                    .position(|m| m.id == id)
                    .ok_or_else(|| NetError::Policy(format!("message {id:?} is not pending")))?;
                let m = pending.remove(pos);
                delivered += 1;
                ctx = Ctx::new(m.to, n);
                procs[m.to].on_deliver(m.id.from, &m.body, &mut ctx);

            }
            Event::Schedule { process } => {
                if process >= n {
                    return Err(NetError::Policy(format!("process {process} does not exist")));
                }
                started[process] = true;
                want_since[process] = None;
                ctx = Ctx::new(process, n);
                procs[process].on_schedule(&mut ctx);
            }
        }
        let from = ctx.me;
        for (to, tag, body) in ctx.out {
            sent_count[from] += 1;
            let sent = if script.is_corrupt(from) {
                script.filter(&mut rng, tag, sent_count[from], from, Some(to), Some(&body))
            } else {
                Some(body)
            };
            if let Some(body) = sent {
                pending.push(InFlight { id: MsgId { seq, from }, to, body, since: step });
                seq += 1;
            }
        }
        events.push(ev);
    }
    Err(NetError::EventBudget(max_events))
}
