//! Randomized binary Byzantine agreement for `n > 3k` built on reliable
//! broadcast, with local coins.
//!
//! Each round has three broadcast steps. A received step message is used
//! only once it is *valid*: some `n - k` valid messages of the previous
//! step could have produced it. A player that decides sends DECIDE; k+1
//! matching DECIDEs make a player adopt the value, 2k+1 make it stop.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversary::AdversaryScript;
use crate::asynch::{run_async, AsyncProcess, Ctx, SchedulerPolicy, Watchdog};
use crate::bracha::RbLayer;
use crate::sync::{run_sync, SyncNet};
use crate::{Body, NetError};

const DECIDE: u64 = 9;
pub const TAG_DECIDE: &str = "ba.decide";
/// Step-3 value meaning "no proposal".
const NONE: u64 = 2;

/// Step-3 values `D0` and `D1`.
fn proposal(w: u64) -> u64 {
    3 + w
}

pub struct ConsensusProcess {
    n: usize,
    k: usize,
    me: usize,
    rb: RbLayer,
    rng: ChaCha8Rng,
    round: u64,
    step: u64,
    value: u64,
    /// Valid messages per (round, step), in acceptance order.
    valid: BTreeMap<(u64, u64), Vec<(usize, u64)>>,
    unchecked: Vec<(u64, u64, usize, u64)>,
    decide_from: BTreeMap<usize, u64>,
    sent_decide: bool,
    pub output: Option<u64>,
    started: bool,
}

impl ConsensusProcess {
    pub fn new(n: usize, k: usize, me: usize, preference: bool, seed: u64) -> Self {
        ConsensusProcess {
            n,
            k,
            me,
            rb: RbLayer::new(n, k),
            rng: ChaCha8Rng::seed_from_u64(seed ^ (me as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
            round: 1,
            step: 1,
            value: preference as u64,
            valid: BTreeMap::new(),
            unchecked: Vec::new(),
            decide_from: BTreeMap::new(),
            sent_decide: false,
            output: None,
            started: false,
        }
    }

    fn key(&self, round: u64, step: u64) -> u64 {
        (round * 4 + step) * self.n as u64 + self.me as u64
    }

    fn quorum(&self) -> usize {
        self.n - self.k
    }

    fn counts(&self, round: u64, step: u64) -> [usize; 5] {
        let mut c = [0; 5];
        for &(_, v) in self.valid.get(&(round, step)).into_iter().flatten() {
            c[v as usize] += 1;
        }
        c
    }

    /// Could some `n - k` subset with counts drawn from `have` and `other`
    /// contain at least `need` copies from `have`?
    fn subset_with(&self, have: usize, other: usize, need: usize) -> bool {
        let m = self.quorum();
        let x = have.min(m);
        x >= need && x + other >= m
    }

    fn is_valid(&self, round: u64, step: u64, v: u64) -> bool {
        let m = self.quorum();
        match step {
            1 if round == 1 => v < 2,
            1 => {
                if v >= 2 {
                    return false;
                }
                let c = self.counts(round - 1, 3);
                let total: usize = c.iter().sum();
                let adopt = c[proposal(v) as usize] > self.k && total >= m;
                let coin = c[proposal(0) as usize].min(self.k) + c[proposal(1) as usize].min(self.k) + c[NONE as usize] >= m;
                adopt || coin
            }
            2 => {
                if v >= 2 {
                    return false;
                }
                let c = self.counts(round, 1);
                let need = if v == 0 { m.div_ceil(2) } else { m / 2 + 1 };
                self.subset_with(c[v as usize], c[1 - v as usize], need)
            }
            3 => {
                let c = self.counts(round, 2);
                match v {
                    0 | 1 => false,
                    NONE => c[0].min(self.n / 2) + c[1].min(self.n / 2) >= m,
                    3 | 4 => {
                        let w = (v - 3) as usize;
                        self.subset_with(c[w], c[1 - w], self.n / 2 + 1)
                    }
                    _ => false,
                }
            }
            _ => false,
        }
    }

    fn revalidate(&mut self) {
        loop {
            let mut progressed = false;
            let mut i = 0;
            while i < self.unchecked.len() {
                let (r, s, from, v) = self.unchecked[i];
                if self.is_valid(r, s, v) {
                    self.unchecked.swap_remove(i);
                    self.valid.entry((r, s)).or_default().push((from, v));
                    progressed = true;
                } else {
                    i += 1;
                }
            }
            if !progressed {
                break;
            }
        }
    }

    fn broadcast_step(&mut self, ctx: &mut Ctx) {
        let key = self.key(self.round, self.step);
        self.rb.start(key, vec![self.value], ctx);
    }

    fn decide(&mut self, w: u64, ctx: &mut Ctx) {
        if !self.sent_decide {
            self.sent_decide = true;
            ctx.send_all(TAG_DECIDE, vec![DECIDE, w]);
        }
    }

    /// Moves through as many steps as the valid messages allow.
    fn advance(&mut self, ctx: &mut Ctx) {
        while self.output.is_none() {
            let got: Vec<u64> = match self.valid.get(&(self.round, self.step)) {
                Some(v) if v.len() >= self.quorum() => v[..self.quorum()].iter().map(|&(_, x)| x).collect(),
                _ => return,
            };
            let count = |x: u64| got.iter().filter(|&&y| y == x).count();
            match self.step {
                1 => {
                    self.value = (count(1) > count(0)) as u64;
                    self.step = 2;
                }
                2 => {
                    self.value = (0..2).find(|&w| count(w) > self.n / 2).map_or(NONE, proposal);
                    self.step = 3;
                }
                _ => {
                    let d = [count(proposal(0)), count(proposal(1))];
                    if let Some(w) = (0..2).find(|&w| d[w] > 2 * self.k) {
                        self.decide(w as u64, ctx);
                    }
                    self.value = match (0..2).find(|&w| d[w] > self.k) {
                        Some(w) => w as u64,
                        None => self.rng.gen_range(0..2),
                    };
                    self.round += 1;
                    self.step = 1;
                }
            }
            self.broadcast_step(ctx);
        }
    }
}

impl AsyncProcess for ConsensusProcess {
    fn on_schedule(&mut self, ctx: &mut Ctx) {
        if !self.started {
            self.started = true;
            self.broadcast_step(ctx);
        }
    }

    fn on_deliver(&mut self, from: usize, body: &Body, ctx: &mut Ctx) {
        if body.first() == Some(&DECIDE) {
            if body.len() != 2 || body[1] > 1 || self.decide_from.contains_key(&from) {
                return;
            }
            self.decide_from.insert(from, body[1]);
            let c = self.decide_from.values().filter(|&&w| w == body[1]).count();
            if c > self.k {
                self.decide(body[1], ctx);
            }
            if c > 2 * self.k && self.output.is_none() {
                self.output = Some(body[1]);
            }
            return;
        }
        let Some((key, value)) = self.rb.handle(from, body, ctx) else { return };
        if self.output.is_some() || value.len() != 1 {
            return;
        }
        let n = self.n as u64;
        let origin = (key % n) as usize;
        let (round, step) = ((key / n) / 4, (key / n) % 4);
        if round == 0 || !(1..=3).contains(&step) {
            return;
        }
        self.unchecked.push((round, step, origin, value[0]));
        self.revalidate();
        self.advance(ctx);
    }
}

/// Agreement on one bit per honest player. `None` means the run quiesced
/// before that player terminated.
pub fn consensus_sync(
    k: usize,
    preferences: &[bool],
    script: AdversaryScript,
    seed: u64,
) -> Result<Vec<Option<bool>>, NetError> {
    let n = preferences.len();
    let mut procs: Vec<_> =
        preferences.iter().enumerate().map(|(i, &p)| ConsensusProcess::new(n, k, i, p, seed)).collect();
    let mut net = SyncNet::new(n, script, seed)?;
    run_sync(&mut procs, &mut net, 10_000)?;
    Ok(procs.iter().map(|p| p.output.map(|w| w == 1)).collect())
}

pub fn consensus_async(
    k: usize,
    preferences: &[bool],
    script: &AdversaryScript,
    policy: &mut dyn SchedulerPolicy,
    seed: u64,
) -> Result<Vec<Option<bool>>, NetError> {
    let n = preferences.len();
    let mut procs: Vec<_> =
        preferences.iter().enumerate().map(|(i, &p)| ConsensusProcess::new(n, k, i, p, seed)).collect();
    run_async(&mut procs, policy, script, seed, Watchdog::default(), 1 << 22)?;
    Ok(procs.iter().map(|p| p.output.map(|w| w == 1)).collect())
}
