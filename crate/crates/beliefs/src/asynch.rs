//! The least-weight check with asynchronous delivery into the coalition.
//!
//! A coalition member may not yet have received a message from an
//! outsider when the horizon ends, or may receive one sent before its
//! sender could have computed the honest value. Each inbound edge from an
//! outsider therefore carries a [`Receipt`]. Under a uniform scheduler
//! every schedule prefix has probability independent of the tremble
//! index, so schedules only decide which histories are consistent, not how
//! they are weighed; messages among outsiders are taken as delivered.

use serde::{Deserialize, Serialize};

use crate::paranoid::Plan;
use crate::{BeliefError, CoalitionView, ParanoidOptions, ParanoidReport, Protocol, ViewMinimum, ViewVerdict, PARANOID_SCHEMA};
use mediatorless_game::CoalitionMask;

/// What a coalition member saw on one inbound edge from an outsider.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Receipt {
    Delivered(u64),
    /// Not received by the horizon; the member updates without it.
    Pending,
    /// Received ahead of the sender's inputs for that round, so the value
    /// is a lie whatever it is.
    Early(u64),
}

impl Receipt {
    fn status(self) -> (u64, bool, bool) {
        match self {
            Receipt::Delivered(v) => (v, false, false),
            Receipt::Pending => (0, true, false),
            Receipt::Early(v) => (v, false, true),
        }
    }
}

/// Least weights for one asynchronous view. `receipts[r]` covers the
/// coalition's edges of round `r + 1` in edge order; edges sent by the
/// coalition use `Delivered`.
pub fn async_view_minimum(
    protocol: &dyn Protocol,
    coalition: &[usize],
    coins: &[u64],
    receipts: &[Vec<Receipt>],
) -> Result<ViewMinimum, BeliefError> {
    let plan = Plan::new(protocol, coalition)?;
    let mut rounds = Vec::with_capacity(receipts.len());
    for (r, row) in receipts.iter().enumerate() {
        let edges = protocol.edges(r + 1);
        let incident: Vec<_> = edges.iter().filter(|(f, t)| coalition.contains(f) || coalition.contains(t)).collect();
        if incident.len() != row.len() {
            return Err(BeliefError::Usage(format!("round {} expects {} coalition edges", r + 1, incident.len())));
        }
        for (&&(from, _), rc) in incident.iter().zip(row) {
            let outsider_send = !coalition.contains(&from);
            match rc {
                Receipt::Early(_) if r == 0 => return Err(BeliefError::Usage("no message can be early in round 1".into())),
                Receipt::Pending | Receipt::Early(_) if !outsider_send => {
                    return Err(BeliefError::Usage("coalition sends are always delivered".into()))
                }
                _ => {}
            }
        }
        let status: Vec<_> = row.iter().map(|rc| rc.status()).collect();
        rounds.push((status.iter().map(|s| s.0).collect(), status.iter().map(|s| s.1).collect(), status.iter().map(|s| s.2).collect()));
    }
    plan.follow(coins, &rounds)
}

/// Runs the asynchronous least-weight check over every coalition of size
/// at most `k` and every view over the protocol's full horizon.
pub fn async_belief_check(protocol: &dyn Protocol, k: usize, opts: &ParanoidOptions) -> Result<ParanoidReport, BeliefError> {
    let n = protocol.players();
    let coalitions = CoalitionMask::enumerate(n, k);
    let plans: Vec<Plan> = coalitions.iter().map(|c| Plan::new(protocol, c.members())).collect::<Result<_, _>>()?;
    // Each inbound edge has up to 2|M| + 1 receipts instead of |M| values.
    let needed: u128 = plans.iter().map(Plan::async_view_count).sum();
    if needed > opts.max_views {
        return Err(BeliefError::Budget { needed, budget: opts.max_views });
    }
    let mut report = ParanoidReport {
        schema: PARANOID_SCHEMA.into(),
        protocol: format!("{} (asynchronous)", protocol.name()),
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
    let statuses = |r: usize, _: usize, a: u64| {
        let mut out: Vec<_> = (0..a).map(|v| Receipt::Delivered(v).status()).collect();
        out.push(Receipt::Pending.status());
        if r > 0 {
            out.extend((0..a).map(|v| Receipt::Early(v).status()));
        }
        out
    };
    for plan in &plans {
        plan.explore(&statuses, &mut |view: &CoalitionView, minimum: ViewMinimum| {
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
    Ok(report)
}
