//! Bracha reliable broadcast.
//!
//! With `n > 3k`, honest players that deliver an instance deliver the same
//! value, and an honest origin's value is always delivered. A faulty origin
//! may cause no delivery at all; callers read that as ⊥.

use std::collections::{BTreeMap, BTreeSet};

use crate::adversary::AdversaryScript;
use crate::asynch::{run_async, AsyncProcess, Ctx, SchedulerPolicy, Watchdog};
use crate::sync::{run_sync, SyncNet};
use crate::{Body, NetError};

const INIT: u64 = 0;
const ECHO: u64 = 1;
const READY: u64 = 2;

pub const TAG_INIT: &str = "rb.init";
pub const TAG_ECHO: &str = "rb.echo";
pub const TAG_READY: &str = "rb.ready";

#[derive(Default)]
struct Instance {
    echoed: bool,
    readied: bool,
    delivered: Option<Body>,
    echo_from: BTreeSet<usize>,
    ready_from: BTreeSet<usize>,
    echoes: BTreeMap<Body, usize>,
    readies: BTreeMap<Body, usize>,
}

/// Any number of concurrent broadcast instances. An instance key's origin
/// is `key % n`, and only the origin's INIT counts.
pub struct RbLayer {
    n: usize,
    k: usize,
    instances: BTreeMap<u64, Instance>,
}

impl RbLayer {
    pub fn new(n: usize, k: usize) -> Self {
        RbLayer { n, k, instances: BTreeMap::new() }
    }

    pub fn origin(&self, key: u64) -> usize {
        (key % self.n as u64) as usize
    }

    fn echo_threshold(&self) -> usize {
        (self.n + self.k + 1).div_ceil(2)
    }

    pub fn start(&mut self, key: u64, value: Body, ctx: &mut Ctx) {
        debug_assert_eq!(self.origin(key), ctx.me());
        let mut body = vec![INIT, key];
        body.extend(value);
        ctx.send_all(TAG_INIT, body);
    }

    /// Handles one message; returns `(key, value)` when an instance delivers.
    pub fn handle(&mut self, from: usize, body: &Body, ctx: &mut Ctx) -> Option<(u64, Body)> {
        if body.len() < 2 {
            return None;
        }
        let (kind, key, value) = (body[0], body[1], body[2..].to_vec());
        let origin = self.origin(key);
        let (k, echo_at) = (self.k, self.echo_threshold());
        let inst = self.instances.entry(key).or_default();
        if inst.delivered.is_some() {
            return None;
        }
        match kind {
            INIT if from == origin => {
                if k == 0 {
                    inst.delivered = Some(value.clone());
                    return Some((key, value));
                }
                if !inst.echoed {
                    inst.echoed = true;
                    let mut b = vec![ECHO, key];
                    b.extend(&value);
                    ctx.send_all(TAG_ECHO, b);
                }
            }
            ECHO if inst.echo_from.insert(from) => {
                let c = inst.echoes.entry(value.clone()).or_insert(0);
                *c += 1;
                if *c >= echo_at && !inst.readied {
                    inst.readied = true;
                    let mut b = vec![READY, key];
                    b.extend(&value);
                    ctx.send_all(TAG_READY, b);
                }
            }
            READY if inst.ready_from.insert(from) => {
                let c = inst.readies.entry(value.clone()).or_insert(0);
                *c += 1;
                let c = *c;
                if c > k && !inst.readied {
                    inst.readied = true;
                    let mut b = vec![READY, key];
                    b.extend(&value);
                    ctx.send_all(TAG_READY, b);
                }
                if c > 2 * k {
                    inst.delivered = Some(value.clone());
                    return Some((key, value));
                }
            }
            _ => {}
        }
        None
    }

    pub fn delivered(&self, key: u64) -> Option<&Body> {
        self.instances.get(&key).and_then(|i| i.delivered.as_ref())
    }
}

/// Every player broadcasts its own input (if any) in instance `key = me`.
pub struct BroadcastProcess {
    layer: RbLayer,
    input: Option<Body>,
    started: bool,
    pub outputs: Vec<Option<Body>>,
}

impl BroadcastProcess {
    pub fn new(n: usize, k: usize, input: Option<Body>) -> Self {
        BroadcastProcess { layer: RbLayer::new(n, k), input, started: false, outputs: vec![None; n] }
    }
}

impl AsyncProcess for BroadcastProcess {
    fn on_schedule(&mut self, ctx: &mut Ctx) {
        if !self.started {
            self.started = true;
            if let Some(v) = self.input.take() {
                self.layer.start(ctx.me() as u64, v, ctx);
            }
        }
    }

    fn on_deliver(&mut self, from: usize, body: &Body, ctx: &mut Ctx) {
        if let Some((key, v)) = self.layer.handle(from, body, ctx) {
            if let Some(slot) = self.outputs.get_mut(key as usize) {
                *slot = Some(v);
            }
        }
    }
}

/// Broadcasts every player's input in lockstep rounds; returns each
/// player's view `[player][origin]`, with `None` for ⊥.
pub fn broadcast_sync(
    k: usize,
    inputs: Vec<Option<Body>>,
    script: AdversaryScript,
    seed: u64,
) -> Result<Vec<Vec<Option<Body>>>, NetError> {
    let n = inputs.len();
    let mut procs: Vec<_> = inputs.into_iter().map(|v| BroadcastProcess::new(n, k, v)).collect();
    let mut net = SyncNet::new(n, script, seed)?;
    run_sync(&mut procs, &mut net, 64)?;
    Ok(procs.into_iter().map(|p| p.outputs).collect())
}

pub fn broadcast_async(
    k: usize,
    inputs: Vec<Option<Body>>,
    script: &AdversaryScript,
    policy: &mut dyn SchedulerPolicy,
    seed: u64,
) -> Result<Vec<Vec<Option<Body>>>, NetError> {
    let n = inputs.len();
    let mut procs: Vec<_> = inputs.into_iter().map(|v| BroadcastProcess::new(n, k, v)).collect();
    run_async(&mut procs, policy, script, seed, Watchdog::default(), 1 << 20)?;
    Ok(procs.into_iter().map(|p| p.outputs).collect())
}
