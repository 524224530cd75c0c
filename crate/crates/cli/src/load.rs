//! Resolving game, profile, adversary and scheduler references.
//!
//! A reference is either a path (relative paths resolve against a base
//! directory) or `corpus:<name>` for a built-in game or profile.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mediatorless_game::corpus;
use mediatorless_game::{CorrelatedProfile, GameFile, GameSpec, MuFile, ProfileFile, StrategyProfile};
use mediatorless_net::race::RaceExamplePolicy;
use mediatorless_net::{AdversaryScript, FifoPolicy, RandomPolicy, SchedulerPolicy, ScriptStep, ScriptedPolicy};

use crate::HarnessError;

fn resolve(base: &Path, reference: &str) -> PathBuf {
    let p = Path::new(reference);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|e| HarnessError::file(path, e))
}

fn corpus_game(name: &str) -> Option<GameSpec> {
    let sized = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    match name {
        "game-b" => Some(corpus::game_b()),
        "prisoners-dilemma" => Some(corpus::prisoners_dilemma()),
        "coordination" => Some(corpus::coordination()),
        _ => sized("game-a-")
            .map(corpus::game_a)
            .or_else(|| sized("product-").map(corpus::product_game)),
    }
}

/// Loads a game file or `corpus:game-b`, `corpus:game-a-<n>`,
/// `corpus:product-<n>`, `corpus:prisoners-dilemma`, `corpus:coordination`.
pub fn load_game(reference: &str, base: &Path) -> Result<GameSpec, HarnessError> {
    if let Some(name) = reference.strip_prefix("corpus:") {
        return corpus_game(name).ok_or_else(|| HarnessError::Plan(format!("unknown corpus game `{name}`")));
    }
    let path = resolve(base, reference);
    GameFile::parse(&read(&path)?).map_err(|e| HarnessError::file(&path, e))
}

/// Loads a profile file, or `corpus:game-b-honest` / `corpus:product-honest`
/// for the designated profiles of those games.
pub fn load_mu(reference: &str, game: &GameSpec, base: &Path) -> Result<CorrelatedProfile, HarnessError> {
    if let Some(name) = reference.strip_prefix("corpus:") {
        let mu = match name {
            "game-b-honest" => corpus::game_b_honest(game),
            "product-honest" => corpus::product_honest(game),
            _ => return Err(HarnessError::Plan(format!("unknown corpus profile `{name}`"))),
        };
        mu.check(game)?;
        return Ok(mu);
    }
    let path = resolve(base, reference);
    let file: MuFile = serde_json::from_str(&read(&path)?).map_err(|e| HarnessError::file(&path, e))?;
    file.into_profile(game).map_err(|e| HarnessError::file(&path, e))
}

pub fn load_profile(reference: &str, game: &GameSpec, base: &Path) -> Result<StrategyProfile, HarnessError> {
    let path = resolve(base, reference);
    let file: ProfileFile = serde_json::from_str(&read(&path)?).map_err(|e| HarnessError::file(&path, e))?;
    file.into_profile(game).map_err(|e| HarnessError::file(&path, e))
}

/// Loads and validates an adversary script for `n` parties.
pub fn load_script(reference: &str, n: usize, base: &Path) -> Result<AdversaryScript, HarnessError> {
    let path = resolve(base, reference);
    let script = AdversaryScript::parse(&read(&path)?).map_err(|e| HarnessError::file(&path, e))?;
    script.validate(n).map_err(|e| HarnessError::file(&path, e))?;
    Ok(script)
}

/// A scheduler by name: `fifo`, `random`, `race-example` or
/// `custom:<file>` holding a JSON list of opening steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchedulerSpec {
    Fifo,
    Random,
    RaceExample,
    Custom { path: String, steps: Vec<ScriptStep> },
}

impl SchedulerSpec {
    /// Parses a name; custom files resolve against `base`.
    pub fn parse(name: &str, base: &Path) -> Result<Self, HarnessError> {
        match name {
            "fifo" => Ok(SchedulerSpec::Fifo),
            "random" => Ok(SchedulerSpec::Random),
            "race-example" => Ok(SchedulerSpec::RaceExample),
            _ => {
                let Some(file) = name.strip_prefix("custom:") else {
                    return Err(HarnessError::Plan(format!("unknown scheduler `{name}`")));
                };
                let path = resolve(base, file);
                let steps = serde_json::from_str(&read(&path)?).map_err(|e| HarnessError::file(&path, e))?;
                Ok(SchedulerSpec::Custom { path: file.into(), steps })
            }
        }
    }

    /// A fresh policy for one run. `players` excludes the mediator.
    pub fn policy(&self, players: usize, seed: u64) -> Box<dyn SchedulerPolicy> {
        match self {
            SchedulerSpec::Fifo => Box::new(FifoPolicy::default()),
            SchedulerSpec::Random => Box::new(RandomPolicy::new(seed)),
            SchedulerSpec::RaceExample => Box::new(RaceExamplePolicy::new(players, seed)),
            SchedulerSpec::Custom { steps, .. } => Box::new(ScriptedPolicy::new(steps.clone())),
        }
    }
}

impl FromStr for SchedulerSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchedulerSpec::parse(s, Path::new("."))
    }
}

impl From<SchedulerSpec> for String {
    fn from(s: SchedulerSpec) -> String {
        match s {
            SchedulerSpec::Fifo => "fifo".into(),
            SchedulerSpec::Random => "random".into(),
            SchedulerSpec::RaceExample => "race-example".into(),
            SchedulerSpec::Custom { path, .. } => format!("custom:{path}"),
        }
    }
}
