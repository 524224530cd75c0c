//! Lockstep synchronous transport.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::AdversaryScript;
use crate::asynch::{AsyncProcess, Ctx};
use crate::{Body, NetError};

/// One transcript line. `to == None` marks a broadcast.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub round: u32,
    pub tag: String,
    pub from: usize,
    pub to: Option<usize>,
    pub intended: Option<Body>,
    pub sent: Option<Body>,
}

impl Record {
    /// A corrupted sender deviated from what its honest code produced.
    pub fn is_lie(&self) -> bool {
        self.intended != self.sent
    }
}

pub struct SyncNet {
    n: usize,
    round: u32,
    script: AdversaryScript,
    rng: ChaCha8Rng,
    record: Option<Vec<Record>>,
}

impl SyncNet {
    pub fn new(n: usize, script: AdversaryScript, run_seed: u64) -> Result<Self, NetError> {
        script.validate(n)?;
        let rng = script.rng(run_seed);
        Ok(SyncNet { n, round: 0, script, rng, record: None })
    }

    pub fn honest(n: usize) -> Self {
        Self::new(n, AdversaryScript::none(), 0).expect("empty script is valid")
    }

    pub fn recording(mut self) -> Self {
        self.record = Some(Vec::new());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rounds completed so far.
    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn script(&self) -> &AdversaryScript {
        &self.script
    }

    pub fn is_corrupt(&self, i: usize) -> bool {
        self.script.is_corrupt(i)
    }

    pub fn transcript(&self) -> &[Record] {
        self.record.as_deref().unwrap_or(&[])
    }

    pub fn take_transcript(&mut self) -> Vec<Record> {
        self.record.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Point-to-point round: `out[from][to]` in, `inbox[to][from]` out.
    pub fn exchange(&mut self, tag: &str, out: Vec<Vec<Option<Body>>>) -> Vec<Vec<Option<Body>>> {
        assert_eq!(out.len(), self.n, "one outbox per player");
        self.round += 1;
        let round = self.round;
        let mut inbox: Vec<Vec<Option<Body>>> = vec![vec![None; self.n]; self.n];
        for (from, row) in out.into_iter().enumerate() {
            assert_eq!(row.len(), self.n, "one slot per recipient");
            let corrupt = self.script.is_corrupt(from);
            for (to, msg) in row.into_iter().enumerate() {
                let sent = if corrupt {
                    self.script.filter(&mut self.rng, tag, round, from, Some(to), msg.as_ref())
                } else {
                    None
                };
                if let Some(rec) = self.record.as_mut() {
                    if msg.is_some() || sent.is_some() {
                        let s = if corrupt { sent.clone() } else { msg.clone() };
                        rec.push(Record { round, tag: tag.into(), from, to: Some(to), intended: msg.clone(), sent: s });
                    }
                }
                inbox[to][from] = if corrupt { sent } else { msg };
            }
        }
        inbox
    }

    /// One round carrying any number of individually tagged messages.
    pub fn exchange_many(
        &mut self,
        msgs: Vec<(usize, usize, &'static str, Body)>,
    ) -> Vec<(usize, usize, &'static str, Body)> {
        self.round += 1;
        let round = self.round;
        let mut delivered = Vec::with_capacity(msgs.len());
        for (from, to, tag, body) in msgs {
            let sent = if self.script.is_corrupt(from) {
                self.script.filter(&mut self.rng, tag, round, from, Some(to), Some(&body))
            } else {
                Some(body.clone())
            };
            if let Some(rec) = self.record.as_mut() {
                rec.push(Record { round, tag: tag.into(), from, to: Some(to), intended: Some(body), sent: sent.clone() });
            }
            if let Some(b) = sent {
                delivered.push((from, to, tag, b));
            }
        }
        delivered
    }

    /// Ideal broadcast: every player sees the same value per sender.
    pub fn broadcast(&mut self, tag: &str, out: Vec<Option<Body>>) -> Vec<Option<Body>> {
        assert_eq!(out.len(), self.n, "one message per player");
        self.round += 1;
        let round = self.round;
        out.into_iter()
            .enumerate()
            .map(|(from, msg)| {
                let sent = if self.script.is_corrupt(from) {
                    self.script.filter(&mut self.rng, tag, round, from, None, msg.as_ref())
                } else {
                    msg.clone()
                };
                if let Some(rec) = self.record.as_mut() {
                    if msg.is_some() || sent.is_some() {
                        rec.push(Record { round, tag: tag.into(), from, to: None, intended: msg, sent: sent.clone() });
                    }
                }
                sent
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncOutcome {
    pub rounds: u32,
    pub messages: usize,
}

/// Runs event-driven processes in lockstep: everything sent in a round is
/// delivered, in sender order, at the start of the next.
pub fn run_sync<P: AsyncProcess>(
    procs: &mut [P],
    net: &mut SyncNet,
    max_rounds: u32,
) -> Result<SyncOutcome, NetError> {
    let n = procs.len();
    assert_eq!(n, net.n());
    let mut messages = 0;
    let mut out: Vec<Vec<Vec<(&'static str, Body)>>> = vec![vec![Vec::new(); n]; n];
    let mut first = true;
    for _ in 0..max_rounds {
        let mut ctxs: Vec<Ctx> = (0..n).map(|i| Ctx::new(i, n)).collect();
        // Deliver what was sent last round.
        let pending = std::mem::replace(&mut out, vec![vec![Vec::new(); n]; n]);
        let any = pending.iter().flatten().any(|v| !v.is_empty());
        for (from, row) in pending.into_iter().enumerate() {
            for (to, msgs) in row.into_iter().enumerate() {
                for (_, body) in msgs {
                    messages += 1;
                    procs[to].on_deliver(from, &body, &mut ctxs[to]);
                }
            }
        }
        let mut scheduled = false;
        for (i, p) in procs.iter_mut().enumerate() {
            if first || p.wants_schedule() {
                p.on_schedule(&mut ctxs[i]);
                scheduled = true;
            }
        }
        if !any && !scheduled && !first {
            return Ok(SyncOutcome { rounds: net.round(), messages });
        }
        first = false;
        let msgs = ctxs
            .into_iter()
            .flat_map(|c| {
                let from = c.me;
                c.out.into_iter().map(move |(to, tag, body)| (from, to, tag, body))
            })
            .collect();
        for (from, to, tag, body) in net.exchange_many(msgs) {
            out[from][to].push((tag, body));
        }
    }
    Err(NetError::EventBudget(max_rounds as usize))
}
