//! Exhaustive check that belief limits blame only the coalition.
//!
//! Under the tremble family a history's probability is
//! `m^(−w(h))·Θ(1)` with `w` its weight exponent, so as `m → ∞` a
//! coalition's beliefs concentrate on the consistent histories of least
//! weight. For every coalition `K` and every view `h_K` we compute that
//! least weight over histories where the outsiders never lie to each
//! other, and over histories where they do, and require the second to be
//! strictly larger.
//!
//! The search runs round by round over the outsiders' states. A view fixes
//! the coalition's coins and every message into or out of the coalition;
//! the free parts are the outsiders' coins and the messages among them.
//! Weights are kept as integers scaled by `(2n)^R`.

use std::collections::HashMap;

use mediatorless_game::rational::serde_rat;
use mediatorless_game::{CoalitionMask, Rational};
use num::BigInt;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::{
    label_lies, lie_sequence, sample_history, tremble_probability, truthful_variant, weight_exponent, BeliefError,
    GlobalHistory, Message, Protocol,
};

pub const PARANOID_SCHEMA: &str = "mediatorless-paranoid-v1";

/// What a coalition jointly sees: its coins, and the value on every edge
/// touching it, per round in edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoalitionView {
    pub coalition: Vec<usize>,
    pub coins: Vec<u64>,
    pub rounds: Vec<Vec<u64>>,
}

impl CoalitionView {
    pub fn of(protocol: &dyn Protocol, h: &GlobalHistory, coalition: &[usize]) -> Self {
        let touches = |m: &Message| coalition.contains(&m.from) || coalition.contains(&m.to);
        let _ = protocol;
        CoalitionView {
            coalition: coalition.to_vec(),
            coins: coalition.iter().map(|&i| h.coins[i]).collect(),
            rounds: h.rounds.iter().map(|r| r.iter().filter(|m| touches(m)).map(|m| m.value).collect()).collect(),
        }
    }
}

/// Least weights among histories consistent with one view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewMinimum {
    #[serde(with = "serde_rat")]
    pub min_weight: Rational,
    /// Minimizers in which outsiders never lie to each other.
    pub truthful_minimizers: u64,
    /// Least weight with some lie between outsiders, if any is consistent.
    #[serde(default, with = "opt_rat")]
    pub untruthful_weight: Option<Rational>,
    /// Minimizers with a lie between outsiders; 0 when the view passes.
    pub untruthful_minimizers: u64,
}

impl ViewMinimum {
    pub fn passes(&self) -> bool {
        self.untruthful_minimizers == 0
    }
}

mod opt_rat {
    use mediatorless_game::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(|r| r.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|s| mediatorless_game::rational::parse(&s).ok_or_else(|| serde::de::Error::custom("bad rational")))
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewVerdict {
    pub view: CoalitionView,
    pub minimum: ViewMinimum,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub pairs: usize,
    pub grid: Vec<f64>,
    pub threshold: f64,
    /// Every ratio strictly decreases along the grid.
    pub monotone: bool,
    /// Largest ratio at the last grid point.
    pub worst_final: f64,
    pub below_threshold: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParanoidReport {
    pub schema: String,
    pub protocol: String,
    pub players: usize,
    pub rounds: usize,
    pub k: usize,
    pub coalitions: Vec<Vec<usize>>,
    pub views: u64,
    pub failing: u64,
    /// Every minimizer of every view has truthful outsiders.
    pub passed: bool,
    /// All views when `detailed`, otherwise the failing ones (at most 100).
    pub verdicts: Vec<ViewVerdict>,
    pub ratio: Option<RatioCheck>,
}

#[derive(Clone, Debug)]
pub struct ParanoidOptions {
    pub max_views: u128,
    pub detailed: bool,
    /// Truthful-variant pairs fed to the ratio check; 0 skips it.
    pub ratio_pairs: usize,
    pub seed: u64,
}

impl Default for ParanoidOptions {
    fn default() -> Self {
        ParanoidOptions { max_views: 1 << 24, detailed: false, ratio_pairs: 200, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Best {
    weight: u64,
    count: u64,
}

fn merge(slot: &mut Option<Best>, b: Best) {
    match slot {
        None => *slot = Some(b),
        Some(a) if b.weight < a.weight => *a = b,
        Some(a) if b.weight == a.weight => a.count = a.count.saturating_add(b.count),
        _ => {}
    }
}

fn shift(b: Option<Best>, cost: u64, times: u64) -> Option<Best> {
    b.map(|b| Best { weight: b.weight + cost, count: b.count.saturating_mul(times) })
}

#[derive(Clone, Copy, Debug, Default)]
struct Cell {
    truthful: Option<Best>,
    untruthful: Option<Best>,
}

type Frontier = HashMap<Vec<u64>, Cell>;

struct RoundPlan {
    edges: Vec<(usize, usize)>,
    incident: Vec<usize>,
    internal: Vec<usize>,
    /// Edges into each player, in edge order.
    into: Vec<Vec<usize>>,
}

pub(crate) struct Plan<'a> {
    protocol: &'a dyn Protocol,
    members: Vec<usize>,
    outsiders: Vec<usize>,
    inside: Vec<bool>,
    pos: Vec<usize>,
    rounds: Vec<RoundPlan>,
    units: Vec<u64>,
    scale: u64,
}

impl<'a> Plan<'a> {
    pub(crate) fn new(protocol: &'a dyn Protocol, coalition: &[usize]) -> Result<Self, BeliefError> {
        let n = protocol.players();
        let mask = CoalitionMask::new(coalition.to_vec(), coalition.len(), n)?;
        let members = mask.members().to_vec();
        let outsiders = mask.complement(n);
        let inside: Vec<bool> = (0..n).map(|i| mask.contains(i)).collect();
        let mut pos = vec![0; n];
        for (p, &i) in members.iter().enumerate() {
            pos[i] = p;
        }
        for (p, &i) in outsiders.iter().enumerate() {
            pos[i] = p;
        }
        let big_r = protocol.rounds();
        let rounds = (1..=big_r)
            .map(|r| {
                let edges = protocol.edges(r);
                let (incident, internal) = (0..edges.len()).partition(|&e| inside[edges[e].0] || inside[edges[e].1]);
                let into = (0..n).map(|i| (0..edges.len()).filter(|&e| edges[e].1 == i).collect()).collect();
                RoundPlan { edges, incident, internal, into }
            })
            .collect();
        let base = 2 * n as u64;
        let units = (1..=big_r).map(|r| base.pow((big_r - r) as u32)).collect();
        Ok(Plan { protocol, members, outsiders, inside, pos, rounds, units, scale: base.pow(big_r as u32) })
    }

    pub(crate) fn view_count(&self) -> u128 {
        let a = self.protocol.alphabet() as u128;
        let mut v = (self.protocol.coins() as u128).pow(self.members.len() as u32);
        for r in &self.rounds {
            v = v.saturating_mul(a.saturating_pow(r.incident.len() as u32));
        }
        v
    }

    pub(crate) fn async_view_count(&self) -> u128 {
        let a = self.protocol.alphabet() as u128;
        let mut v = (self.protocol.coins() as u128).pow(self.members.len() as u32);
        for (r, plan) in self.rounds.iter().enumerate() {
            for &e in &plan.incident {
                let from_outside = !self.inside[plan.edges[e].0];
                let options = if !from_outside { a } else if r == 0 { a + 1 } else { 2 * a + 1 };
                v = v.saturating_mul(options);
            }
        }
        v
    }

    fn start(&self, coins: &[u64]) -> (Frontier, Vec<u64>) {
        let p = self.protocol;
        let k_states = self.members.iter().zip(coins).map(|(&i, &c)| p.init(i, c)).collect();
        let mut frontier = Frontier::new();
        let c = p.coins();
        let m = self.outsiders.len();
        for idx in 0..c.pow(m as u32) {
            let key: Vec<u64> = digits(idx, c, m).iter().zip(&self.outsiders).map(|(&coin, &i)| p.init(i, coin)).collect();
            merge(&mut frontier.entry(key).or_default().truthful, Best { weight: 0, count: 1 });
        }
        (frontier, k_states)
    }

    /// Advances by one round given the values on the coalition's edges.
    /// `silent` marks incident edges whose value the coalition did not
    /// observe; `forced` marks incident edges that are lies whatever their
    /// value. Returns the coalition's own lie cost separately.
    fn step(
        &self,
        r: usize,
        frontier: &Frontier,
        k_states: &[u64],
        ext: &[u64],
        silent: &[bool],
        forced: &[bool],
    ) -> (Frontier, Vec<u64>, u64) {
        let p = self.protocol;
        let round = r + 1;
        let plan = &self.rounds[r];
        let unit = self.units[r];
        let last = r + 1 == self.rounds.len();
        let alphabet = p.alphabet();
        let mut values = vec![0u64; plan.edges.len()];
        let mut seen = vec![true; plan.edges.len()];
        let mut k_cost = 0;
        let mut outsider_forced = 0;
        for (slot, &e) in plan.incident.iter().enumerate() {
            values[e] = ext[slot];
            seen[e] = !silent[slot];
            let (from, to) = plan.edges[e];
            if self.inside[from] && !silent[slot] && ext[slot] != p.message(from, k_states[self.pos[from]], round, to) {
                k_cost += unit;
            }
            if !self.inside[from] && forced[slot] {
                outsider_forced += unit;
            }
        }
        let received = |i: usize, values: &[u64]| -> Vec<(usize, u64)> {
            plan.into[i].iter().filter(|&&e| seen[e]).map(|&e| (plan.edges[e].0, values[e])).collect()
        };
        let next_k: Vec<u64> =
            self.members.iter().map(|&i| p.update(i, k_states[self.pos[i]], round, &received(i, &values))).collect();

        let m = plan.internal.len();
        let wrong_per_edge = alphabet - 1;
        let mut next = Frontier::new();
        for (key, cell) in frontier {
            let mut base = outsider_forced;
            for (slot, &e) in plan.incident.iter().enumerate() {
                let (from, to) = plan.edges[e];
                if !self.inside[from] && !silent[slot] && !forced[slot] && values[e] != p.message(from, key[self.pos[from]], round, to) {
                    base += unit;
                }
            }
            let honest: Vec<u64> = plan
                .internal
                .iter()
                .map(|&e| {
                    let (from, to) = plan.edges[e];
                    p.message(from, key[self.pos[from]], round, to)
                })
                .collect();
            if last {
                // States no longer matter: the cheapest completions tell no
                // further lie, or exactly one if none was told yet.
                let slot = next.entry(Vec::new()).or_default();
                if let Some(t) = shift(cell.truthful, base, 1) {
                    merge(&mut slot.truthful, t);
                }
                if let Some(u) = shift(cell.untruthful, base, 1) {
                    merge(&mut slot.untruthful, u);
                }
                if m > 0 {
                    if let Some(u) = shift(cell.truthful, base + unit, m as u64 * wrong_per_edge) {
                        merge(&mut slot.untruthful, u);
                    }
                }
                continue;
            }
            let mut vals = values.clone();
            for idx in 0..alphabet.pow(m as u32) {
                let choice = digits(idx, alphabet, m);
                let mut lies = 0;
                for ((&e, &v), &h) in plan.internal.iter().zip(&choice).zip(&honest) {
                    vals[e] = v;
                    lies += (v != h) as u64;
                }
                let new_key: Vec<u64> = self
                    .outsiders
                    .iter()
                    .map(|&i| p.update(i, key[self.pos[i]], round, &received(i, &vals)))
                    .collect();
                let cost = base + lies * unit;
                let slot = next.entry(new_key).or_default();
                if lies == 0 {
                    if let Some(t) = shift(cell.truthful, cost, 1) {
                        merge(&mut slot.truthful, t);
                    }
                } else if let Some(t) = shift(cell.truthful, cost, 1) {
                    merge(&mut slot.untruthful, t);
                }
                if let Some(u) = shift(cell.untruthful, cost, 1) {
                    merge(&mut slot.untruthful, u);
                }
            }
        }
        (next, next_k, k_cost)
    }

    fn finish(&self, frontier: &Frontier, offset: u64) -> ViewMinimum {
        let mut t = None;
        let mut u = None;
        for cell in frontier.values() {
            if let Some(b) = shift(cell.truthful, offset, 1) {
                merge(&mut t, b);
            }
            if let Some(b) = shift(cell.untruthful, offset, 1) {
                merge(&mut u, b);
            }
        }
        let t = t.expect("a history with truthful outsiders is always consistent");
        let rat = |w: u64| Rational::new(BigInt::from(w), BigInt::from(self.scale));
        let min = u.map_or(t.weight, |u| u.weight.min(t.weight));
        ViewMinimum {
            min_weight: rat(min),
            truthful_minimizers: if t.weight == min { t.count } else { 0 },
            untruthful_weight: u.map(|u| rat(u.weight)),
            untruthful_minimizers: u.filter(|u| u.weight == min).map_or(0, |u| u.count),
        }
    }

    /// Walks every view, calling `sink` at each leaf. Each incident edge
    /// takes one of `statuses(r, slot)`: `(value, silent, forced)`.
    pub(crate) fn explore(
        &self,
        statuses: &dyn Fn(usize, usize, u64) -> Vec<(u64, bool, bool)>,
        sink: &mut dyn FnMut(&CoalitionView, ViewMinimum),
    ) {
        let c = self.protocol.coins();
        let k = self.members.len();
        for idx in 0..c.pow(k as u32) {
            let coins = digits(idx, c, k);
            let (frontier, k_states) = self.start(&coins);
            let mut view = CoalitionView { coalition: self.members.clone(), coins, rounds: Vec::new() };
            self.descend(0, &frontier, &k_states, 0, &mut view, statuses, sink);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        r: usize,
        frontier: &Frontier,
        k_states: &[u64],
        offset: u64,
        view: &mut CoalitionView,
        statuses: &dyn Fn(usize, usize, u64) -> Vec<(u64, bool, bool)>,
        sink: &mut dyn FnMut(&CoalitionView, ViewMinimum),
    ) {
        if r == self.rounds.len() {
            let min = self.finish(frontier, offset);
            sink(view, min);
            return;
        }
        let plan = &self.rounds[r];
        let options: Vec<Vec<(u64, bool, bool)>> = plan
            .incident
            .iter()
            .enumerate()
            .map(|(slot, &e)| {
                let from = plan.edges[e].0;
                if self.inside[from] {
                    (0..self.protocol.alphabet()).map(|v| (v, false, false)).collect()
                } else {
                    statuses(r, slot, self.protocol.alphabet())
                }
            })
            .collect();
        let mut pick = vec![0usize; options.len()];
        loop {
            let chosen: Vec<(u64, bool, bool)> = pick.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            let ext: Vec<u64> = chosen.iter().map(|c| c.0).collect();
            let silent: Vec<bool> = chosen.iter().map(|c| c.1).collect();
            let forced: Vec<bool> = chosen.iter().map(|c| c.2).collect();
            let (next, next_k, cost) = self.step(r, frontier, k_states, &ext, &silent, &forced);
            view.rounds.push(encode(&chosen));
            self.descend(r + 1, &next, &next_k, offset + cost, view, statuses, sink);
            view.rounds.pop();
            // Odometer over the options of each slot.
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return;
                }
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    pub(crate) fn follow(
        &self,
        coins: &[u64],
        rounds: &[(Vec<u64>, Vec<bool>, Vec<bool>)],
    ) -> Result<ViewMinimum, BeliefError> {
        if coins.len() != self.members.len() || rounds.len() != self.rounds.len() {
            return Err(BeliefError::Usage("view does not match the coalition and horizon".into()));
        }
        let (mut frontier, mut k_states) = self.start(coins);
        let mut offset = 0;
        for (r, (ext, silent, forced)) in rounds.iter().enumerate() {
            let width = self.rounds[r].incident.len();
            if ext.len() != width || silent.len() != width || forced.len() != width {
                return Err(BeliefError::Usage(format!("round {} expects {width} coalition edges", r + 1)));
            }
            let (next, next_k, cost) = self.step(r, &frontier, &k_states, ext, silent, forced);
            frontier = next;
            k_states = next_k;
            offset += cost;
        }
        Ok(self.finish(&frontier, offset))
    }
}

/// View values: a plain value, `u64::MAX` for a pending receipt, or the
/// value with bit 32 set for an early one.
fn encode(chosen: &[(u64, bool, bool)]) -> Vec<u64> {
    chosen.iter().map(|&(v, silent, forced)| if silent { u64::MAX } else if forced { v | 1 << 32 } else { v }).collect()
}

fn digits(mut idx: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = idx % base;
        idx /= base;
    }
    out
}

/// Least weights for one synchronous view.
pub fn view_minimum(protocol: &dyn Protocol, view: &CoalitionView) -> Result<ViewMinimum, BeliefError> {
    let plan = Plan::new(protocol, &view.coalition)?;
    let rounds: Vec<_> = view.rounds.iter().map(|r| (r.clone(), vec![false; r.len()], vec![false; r.len()])).collect();
    plan.follow(&view.coins, &rounds)
}

/// The least-weight histories consistent with `view`, by brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimizerSet {
    #[serde(with = "serde_rat")]
    pub min_weight: Rational,
    pub histories: Vec<GlobalHistory>,
}

/// Enumerates every completion of `view` and keeps the least-weight ones.
/// Independent of the round-by-round search; meant for small cases.
pub fn minimizers(protocol: &dyn Protocol, view: &CoalitionView) -> Result<MinimizerSet, BeliefError> {
    let plan = Plan::new(protocol, &view.coalition)?;
    let n = protocol.players();
    let internal: usize = plan.rounds.iter().map(|r| r.internal.len()).sum();
    let (c, a) = (protocol.coins(), protocol.alphabet());
    let total = (c as u128).pow(plan.outsiders.len() as u32) * (a as u128).pow(internal as u32);
    if total > 1 << 24 {
        return Err(BeliefError::Budget { needed: total, budget: 1 << 24 });
    }
    if view.rounds.len() != plan.rounds.len() || view.coins.len() != plan.members.len() {
        return Err(BeliefError::Usage("view does not match the coalition and horizon".into()));
    }
    let mut best: Option<Rational> = None;
    let mut out = Vec::new();
    for idx in 0..total as u64 {
        let coin_idx = idx % c.pow(plan.outsiders.len() as u32);
        let mut msg = digits(idx / c.pow(plan.outsiders.len() as u32), a, internal).into_iter();
        let mut coins = vec![0; n];
        for (p, &i) in plan.members.iter().enumerate() {
            coins[i] = view.coins[p];
        }
        for (&i, v) in plan.outsiders.iter().zip(digits(coin_idx, c, plan.outsiders.len())) {
            coins[i] = v;
        }
        let rounds = plan
            .rounds
            .iter()
            .zip(&view.rounds)
            .map(|(rp, vals)| {
                let mut incident = vals.iter();
                (0..rp.edges.len())
                    .map(|e| {
                        let (from, to) = rp.edges[e];
                        let value = if plan.inside[from] || plan.inside[to] {
                            *incident.next().expect("view covers every coalition edge")
                        } else {
                            msg.next().expect("enough internal digits")
                        };
                        Message { from, to, value }
                    })
                    .collect()
            })
            .collect();
        let h = GlobalHistory { players: n, coins, rounds };
        let w = weight_exponent(&lie_sequence(&label_lies(protocol, &h)?), n);
        match &best {
            Some(b) if w > *b => {}
            Some(b) if w == *b => out.push(h),
            _ => {
                best = Some(w);
                out = vec![h];
            }
        }
    }
    Ok(MinimizerSet { min_weight: best.expect("at least one completion"), histories: out })
}

/// Ratio `P(h)/P(h')` of the message-pattern probabilities for each pair,
/// where `h` has the larger lie sequence, over the tremble indices in
/// `grid`. Coin factors cancel for pairs sharing coins.
pub fn ratio_check(
    protocol: &dyn Protocol,
    pairs: &[(GlobalHistory, GlobalHistory)],
    grid: &[f64],
    threshold: f64,
) -> Result<RatioCheck, BeliefError> {
    let mut monotone = true;
    let mut worst_final = 0.0f64;
    for (h, h2) in pairs {
        let (a, b) = (label_lies(protocol, h)?, label_lies(protocol, h2)?);
        let mut prev = f64::INFINITY;
        for &m in grid {
            let log = tremble_probability(protocol, &a, m)?.log_pattern - tremble_probability(protocol, &b, m)?.log_pattern;
            let ratio = log.exp();
            monotone &= ratio < prev;
            prev = ratio;
        }
        worst_final = worst_final.max(prev);
    }
    Ok(RatioCheck {
        pairs: pairs.len(),
        grid: grid.to_vec(),
        threshold,
        monotone,
        worst_final,
        below_threshold: worst_final < threshold,
    })
}

/// Tremble indices `2, 4, …, 2^12`.
pub(crate) fn default_grid() -> Vec<f64> {
    (1..=12).map(|e| 2f64.powi(e)).collect()
}

/// Pairs `(h, truthful_variant(h))` from random histories in which the
/// outsiders of the first coalition lie to each other.
pub(crate) fn variant_pairs(
    protocol: &dyn Protocol,
    coalition: &CoalitionMask,
    count: usize,
    seed: u64,
) -> Result<Vec<(GlobalHistory, GlobalHistory)>, BeliefError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(count);
    let mut tries = 0;
    while pairs.len() < count && tries < 100 * count.max(1) {
        tries += 1;
        let h = sample_history(protocol, &mut rng, 0.2);
        match truthful_variant(protocol, &h, coalition) {
            Ok(v) => pairs.push((h, v)),
            Err(BeliefError::Usage(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(pairs)
}

/// Runs the least-weight check over every coalition of size at most `k`
/// and every view.
pub fn verify_k_paranoid(protocol: &dyn Protocol, k: usize, opts: &ParanoidOptions) -> Result<ParanoidReport, BeliefError> {
    let n = protocol.players();
    let coalitions = CoalitionMask::enumerate(n, k);
    let plans: Vec<Plan> = coalitions.iter().map(|c| Plan::new(protocol, c.members())).collect::<Result<_, _>>()?;
    let needed: u128 = plans.iter().map(Plan::view_count).sum();
    if needed > opts.max_views {
        return Err(BeliefError::Budget { needed, budget: opts.max_views });
    }
    let mut report = ParanoidReport {
        schema: PARANOID_SCHEMA.into(),
        protocol: protocol.name().into(),
        players: n,
        rounds: protocol.rounds(),
        k,
        coalitions: coalitions.iter().map(|c| c.members().to_vec()).collect(),
        views: 0,
        failing: 0,
        passed: true,
        verdicts: Vec::new(),
        ratio: None,
    };
    let values = |_: usize, _: usize, a: u64| (0..a).map(|v| (v, false, false)).collect();
    for plan in &plans {
        plan.explore(&values, &mut |view, minimum| {
            report.views += 1;
            let ok = minimum.passes();
            if !ok {
                report.failing += 1;
            }
            if opts.detailed || (!ok && report.verdicts.len() < 100) {
                report.verdicts.push(ViewVerdict { view: view.clone(), minimum });
            }
        });
    }
    report.passed = report.failing == 0;
    if opts.ratio_pairs > 0 {
        if let Some(first) = coalitions.first() {
            let pairs = variant_pairs(protocol, first, opts.ratio_pairs, opts.seed)?;
            report.ratio = Some(ratio_check(protocol, &pairs, &default_grid(), 1e-3)?);
        }
    }
    Ok(report)
}
