use std::path::Path;

use mediatorless_equilibrium::{find_punishment_equilibrium, CheckOptions};
use mediatorless_game::rational::{serde_rat, to_f64};
use mediatorless_game::{CorrelatedProfile, GameSpec, Rational, StrategyProfile};
use mediatorless_net::AdversaryScript;
use mediatorless_protocol::{run_async_mediator_game, run_cheap_talk, run_mediator_game, MediatorRule, ProtocolConfig};
use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{
    default_tolerance, load_game, load_mu, load_profile, load_script, tv_distance, AssertionOutcome, HarnessError,
    Parameters, ProfileSummary, Report, RunRecord, SchedulerSpec, REPORT_SCHEMA,
};

pub const PLAN_SCHEMA: &str = "mediatorless-plan-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Mediator,
    CheapTalk,
    Async,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeSelection {
    /// Every type profile with positive prior.
    #[default]
    All,
    List(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Assertion {
    /// Honest players' action distribution per type profile; the default
    /// tolerance is `4·sqrt(|support|/runs)`.
    TvAtMost {
        #[serde(default)]
        tolerance: Option<f64>,
    },
    HonestActed,
    NoWrongReconstructions,
    NoFlags,
    /// Prior-weighted mean payoff over the selected type profiles.
    MeanPayoff {
        player: usize,
        #[serde(with = "serde_rat")]
        value: Rational,
        tolerance: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub schema: String,
    pub name: String,
    pub scenario: Scenario,
    /// Game file or `corpus:` reference, relative to the plan's directory.
    pub game: String,
    pub mu: String,
    pub k: usize,
    pub seed: u64,
    pub runs: u64,
    #[serde(default)]
    pub types: TypeSelection,
    #[serde(default)]
    pub adversary: Option<String>,
    #[serde(default)]
    pub scheduler: Option<String>,
    /// Strategy profile used as punishment by the asynchronous mediator.
    #[serde(default)]
    pub punishment: Option<String>,
    #[serde(default)]
    pub assertions: Vec<Assertion>,
    #[serde(default = "yes")]
    pub record_runs: bool,
}

fn yes() -> bool {
    true
}

/// A fully resolved batch of runs.
pub struct Batch {
    pub name: String,
    pub scenario: Scenario,
    pub game_ref: String,
    pub mu_ref: String,
    pub game: GameSpec,
    pub mu: CorrelatedProfile,
    pub k: usize,
    pub seed: u64,
    pub runs: u64,
    pub types: Vec<Vec<usize>>,
    pub script: AdversaryScript,
    pub scheduler: SchedulerSpec,
    pub punishment: Option<StrategyProfile>,
    pub record_runs: bool,
}

impl Batch {
    pub fn new(scenario: Scenario, game: GameSpec, mu: CorrelatedProfile, k: usize) -> Self {
        let types = positive_profiles(&game);
        Batch {
            name: String::new(),
            scenario,
            game_ref: String::new(),
            mu_ref: String::new(),
            game,
            mu,
            k,
            seed: 0,
            runs: 1,
            types,
            script: AdversaryScript::none(),
            scheduler: SchedulerSpec::Fifo,
            punishment: None,
            record_runs: true,
        }
    }
}

fn positive_profiles(game: &GameSpec) -> Vec<Vec<usize>> {
    game.types().indices().filter(|&t| !game.prior(t).is_zero()).map(|t| game.types().decode(t)).collect()
}

/// Seed of run `run` for the `profile`-th type profile.
fn run_seed(base: u64, profile: usize, run: u64) -> u64 {
    base.wrapping_add((profile as u64) << 32).wrapping_add(run)
}

enum Engine {
    Sync(Box<ProtocolConfig>),
    Async(MediatorRule),
}

fn engine(batch: &Batch) -> Result<Engine, HarnessError> {
    Ok(match batch.scenario {
        Scenario::Mediator | Scenario::CheapTalk => {
            Engine::Sync(Box::new(ProtocolConfig::new(batch.game.clone(), batch.mu.clone(), batch.k)?.with_history(false)))
        }
        Scenario::Async => {
            let options = vec![batch.mu.clone()];
            if batch.game.is_normal_form() {
                Engine::Async(MediatorRule::Select { options })
            } else {
                let punishment = match &batch.punishment {
                    Some(p) => p.clone(),
                    None => find_punishment_equilibrium(&batch.game, &batch.mu, batch.k, &CheckOptions::default())?
                        .ok_or_else(|| HarnessError::Plan("no punishment equilibrium found; supply one".into()))?,
                };
                Engine::Async(MediatorRule::Collect { options, punishment })
            }
        }
    })
}

fn run_one(batch: &Batch, engine: &Engine, types: &[usize], seed: u64) -> Result<RunRecord, HarnessError> {
    let n = batch.game.players();
    let rec = |o: mediatorless_protocol::OutcomeRecord, acted: Vec<bool>, wrong: Vec<usize>| RunRecord {
        seed,
        types: o.types,
        effective_types: o.effective_types,
        actions: o.actions,
        payoffs: o.payoffs,
        acted,
        fallback: o.fallback,
        flags: o.flags,
        wrong_reconstructions: wrong,
        selected: None,
        punished: Vec::new(),
    };
    Ok(match (batch.scenario, engine) {
        (Scenario::Mediator, Engine::Sync(cfg)) => rec(run_mediator_game(cfg, &batch.script, types, seed)?, vec![true; n], vec![]),
        (Scenario::CheapTalk, Engine::Sync(cfg)) => {
            let run = run_cheap_talk(cfg, &batch.script, types, seed)?;
            let acted = run.states.iter().map(|s| s.action.is_some()).collect();
            rec(run.outcome, acted, run.wrong_reconstructions)
        }
        (Scenario::Async, Engine::Async(rule)) => {
            let mut policy = batch.scheduler.policy(n, seed);
            let run = run_async_mediator_game(&batch.game, rule, types, policy.as_mut(), &batch.script, seed)?;
            let mut r = rec(run.outcome, vec![true; n], vec![]);
            r.selected = run.selected;
            r.punished = run.punished;
            r
        }
        _ => unreachable!("engine matches scenario"),
    })
}

fn summarize(batch: &Batch, types: &[usize], runs: &[RunRecord]) -> Result<ProfileSummary, HarnessError> {
    let game = &batch.game;
    let actions = game.actions();
    let n = game.players();
    let honest: Vec<usize> = (0..n).filter(|&i| !batch.script.is_corrupt(i)).collect();
    let sub = actions.restrict(&honest);
    let total = runs.len() as u64;

    let mut counts = vec![0u64; actions.len()];
    let mut honest_counts = vec![0u64; sub.len()];
    let mut by_effective = vec![0u64; game.types().len()];
    let mut payoff_sum = vec![Rational::zero(); n];
    for r in runs {
        let a = actions.index(&r.actions);
        counts[a] += 1;
        honest_counts[actions.project(a, &honest, &sub)] += 1;
        by_effective[game.types().index(&r.effective_types)] += 1;
        for (s, p) in payoff_sum.iter_mut().zip(&r.payoffs) {
            *s += p;
        }
    }
    let runs_r = Rational::from_integer(total.into());
    let mut target = vec![Rational::zero(); actions.len()];
    for (t, &c) in by_effective.iter().enumerate().filter(|(_, &c)| c > 0) {
        let w = Rational::from_integer(c.into()) / &runs_r;
        for (slot, p) in target.iter_mut().zip(batch.mu.dist(t)) {
            *slot += p * &w;
        }
    }
    let mut honest_target = vec![Rational::zero(); sub.len()];
    for (a, p) in target.iter().enumerate() {
        honest_target[actions.project(a, &honest, &sub)] += p;
    }
    let support = honest_target.iter().filter(|p| !p.is_zero()).count();
    Ok(ProfileSummary {
        types: types.to_vec(),
        runs: total,
        tv: tv_distance(&counts, &target)?,
        honest_tv: tv_distance(&honest_counts, &honest_target)?,
        counts,
        target,
        honest: honest.clone(),
        honest_counts,
        honest_target,
        tolerance: default_tolerance(support, total),
        mean_payoffs: payoff_sum.into_iter().map(|s| s / &runs_r).collect(),
        all_honest_acted: runs.iter().all(|r| honest.iter().all(|&i| r.acted[i])),
        wrong_reconstructions: runs.iter().map(|r| r.wrong_reconstructions.len() as u64).sum(),
        flagged_runs: runs.iter().filter(|r| !r.flags.is_empty()).count() as u64,
    })
}

fn evaluate(assertion: &Assertion, game: &GameSpec, profiles: &[ProfileSummary]) -> AssertionOutcome {
    let (passed, detail) = match assertion {
        Assertion::TvAtMost { tolerance } => {
            let worst = profiles
                .iter()
                .map(|p| (p, tolerance.unwrap_or(p.tolerance)))
                .max_by(|a, b| (a.0.honest_tv - a.1).total_cmp(&(b.0.honest_tv - b.1)));
            match worst {
                Some((p, tol)) => (p.honest_tv <= tol, format!("worst tv {:.4} (tolerance {tol:.4}) at types {:?}", p.honest_tv, p.types)),
                None => (true, "no profiles".into()),
            }
        }
        Assertion::HonestActed => {
            let bad: Vec<_> = profiles.iter().filter(|p| !p.all_honest_acted).map(|p| p.types.clone()).collect();
            (bad.is_empty(), format!("profiles with a stalled honest player: {bad:?}"))
        }
        Assertion::NoWrongReconstructions => {
            let wrong: u64 = profiles.iter().map(|p| p.wrong_reconstructions).sum();
            (wrong == 0, format!("{wrong} wrong reconstructions"))
        }
        Assertion::NoFlags => {
            let flagged: u64 = profiles.iter().map(|p| p.flagged_runs).sum();
            (flagged == 0, format!("{flagged} flagged runs"))
        }
        Assertion::MeanPayoff { player, value, tolerance } => {
            let mut mass = Rational::zero();
            let mut mean = Rational::zero();
            for p in profiles {
                let q = game.prior(game.types().index(&p.types));
                match p.mean_payoffs.get(*player) {
                    Some(m) => mean += m * q,
                    None => return AssertionOutcome { assertion: assertion.clone(), passed: false, detail: format!("no player {player}") },
                }
                mass += q;
            }
            if mass.is_zero() {
                (false, "selected profiles have zero prior".into())
            } else {
                let got = to_f64(&(mean / mass));
                ((got - to_f64(value)).abs() <= *tolerance, format!("mean payoff {got:.4}, expected {value}"))
            }
        }
    };
    AssertionOutcome { assertion: assertion.clone(), passed, detail }
}

/// Runs every type profile of the batch `batch.runs` times, in parallel
/// with an ordered reduction, and evaluates `assertions` on the summary.
pub fn run_batch(batch: &Batch, assertions: &[Assertion]) -> Result<Report, HarnessError> {
    if batch.runs == 0 {
        return Err(HarnessError::Plan("run count must be at least 1".into()));
    }
    let n = batch.game.players();
    batch.script.validate(if batch.scenario == Scenario::CheapTalk { n } else { n + 1 })?;
    for t in &batch.types {
        if !batch.game.types().contains(t) {
            return Err(HarnessError::Plan(format!("type profile {t:?} is outside the game")));
        }
    }
    let engine = engine(batch)?;
    let mut all_runs = Vec::new();
    let mut profiles = Vec::new();
    for (pi, types) in batch.types.iter().enumerate() {
        let runs: Vec<RunRecord> = (0..batch.runs)
            .into_par_iter()
            .map(|r| run_one(batch, &engine, types, run_seed(batch.seed, pi, r)))
            .collect::<Result<_, _>>()?;
        profiles.push(summarize(batch, types, &runs)?);
        if batch.record_runs {
            all_runs.extend(runs);
        }
    }
    let assertions: Vec<AssertionOutcome> = assertions.iter().map(|a| evaluate(a, &batch.game, &profiles)).collect();
    let (field, sampler_modulus) = match &engine {
        Engine::Sync(cfg) => ((batch.scenario == Scenario::CheapTalk).then(|| cfg.field.modulus()), Some(cfg.modulus())),
        Engine::Async(_) => (None, None),
    };
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        name: batch.name.clone(),
        scenario: batch.scenario,
        parameters: Parameters {
            game: batch.game_ref.clone(),
            mu: batch.mu_ref.clone(),
            players: n,
            k: batch.k,
            field,
            sampler_modulus,
            seed: batch.seed,
            runs: batch.runs,
            type_profiles: batch.types.clone(),
            adversary: batch.script.clone(),
            scheduler: (batch.scenario == Scenario::Async).then(|| String::from(batch.scheduler.clone())),
        },
        runs: all_runs,
        profiles,
        passed: assertions.iter().all(|a| a.passed),
        assertions,
    })
}

/// Loads the plan's files relative to `base` and runs it.
pub fn run_plan(plan: &ExperimentPlan, base: &Path) -> Result<Report, HarnessError> {
    if plan.schema != PLAN_SCHEMA {
        return Err(HarnessError::Plan(format!("schema `{}`, expected `{PLAN_SCHEMA}`", plan.schema)));
    }
    let game = load_game(&plan.game, base)?;
    let mu = load_mu(&plan.mu, &game, base)?;
    let n = game.players();
    let mut batch = Batch::new(plan.scenario, game, mu, plan.k);
    batch.name = plan.name.clone();
    batch.game_ref = plan.game.clone();
    batch.mu_ref = plan.mu.clone();
    batch.seed = plan.seed;
    batch.runs = plan.runs;
    batch.record_runs = plan.record_runs;
    if let TypeSelection::List(list) = &plan.types {
        batch.types = list.clone();
    }
    if let Some(a) = &plan.adversary {
        batch.script = load_script(a, if plan.scenario == Scenario::CheapTalk { n } else { n + 1 }, base)?;
    }
    if let Some(s) = &plan.scheduler {
        batch.scheduler = SchedulerSpec::parse(s, base)?;
    }
    if let Some(p) = &plan.punishment {
        batch.punishment = Some(load_profile(p, &batch.game, base)?);
    }
    run_batch(&batch, &plan.assertions)
}
