//! JSON documents for games, correlated profiles and strategy profiles.

use serde::{Deserialize, Serialize};

use crate::rational::{serde_rat, serde_rat_vec, Rational};
use crate::{CorrelatedProfile, GameError, GameSpec, StrategyProfile};

pub const GAME_SCHEMA: &str = "mediatorless-game-v1";
pub const MU_SCHEMA: &str = "mediatorless-mu-v1";
pub const PROFILE_SCHEMA: &str = "mediatorless-profile-v1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PriorEntry {
    pub type_profile: Vec<usize>,
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UtilityEntry {
    pub type_profile: Vec<usize>,
    pub action_profile: Vec<usize>,
    #[serde(with = "serde_rat_vec")]
    pub payoffs: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameFile {
    pub schema: String,
    pub players: usize,
    pub types: Vec<Vec<String>>,
    pub prior: Vec<PriorEntry>,
    pub actions: Vec<Vec<String>>,
    pub utilities: Vec<UtilityEntry>,
}

fn check_schema(found: &str, expected: &'static str) -> Result<(), GameError> {
    if found == expected {
        Ok(())
    } else {
        Err(GameError::Schema { found: found.to_string(), expected })
    }
}

impl GameFile {
    pub fn from_game(g: &GameSpec) -> Self {
        use num::ToPrimitive;
        let prior = g
            .types()
            .indices()
            .map(|t| PriorEntry {
                type_profile: g.types().decode(t),
                num: g.prior(t).numer().to_i64().expect("prior numerator fits i64"),
                den: g.prior(t).denom().to_i64().expect("prior denominator fits i64"),
            })
            .collect();
        let mut utilities = Vec::new();
        for t in g.types().indices() {
            for a in g.actions().indices() {
                utilities.push(UtilityEntry {
                    type_profile: g.types().decode(t),
                    action_profile: g.actions().decode(a),
                    payoffs: g.payoffs(t, a).to_vec(),
                });
            }
        }
        GameFile {
            schema: GAME_SCHEMA.into(),
            players: g.players(),
            types: g.type_labels().to_vec(),
            prior,
            actions: g.action_labels().to_vec(),
            utilities,
        }
    }

    /// Builds the game and validates it; entries pointing outside the type
    /// or action spaces are reported as violations.
    pub fn into_game(self) -> Result<GameSpec, GameError> {
        use crate::{ProfileSpace, Violation};
        check_schema(&self.schema, GAME_SCHEMA)?;
        let mut extra = Vec::new();
        if self.players != self.types.len() || self.players != self.actions.len() {
            extra.push(Violation::new(
                "players",
                format!(
                    "{} players but {} type sets and {} action sets",
                    self.players,
                    self.types.len(),
                    self.actions.len()
                ),
            ));
            return Err(GameError::InvalidGame(extra));
        }
        let ts = ProfileSpace::new(self.types.iter().map(Vec::len).collect());
        let acts = ProfileSpace::new(self.actions.iter().map(Vec::len).collect());
        let mut prior = vec![Rational::from_integer(0.into()); ts.len()];
        for e in &self.prior {
            if !ts.contains(&e.type_profile) || e.den == 0 {
                extra.push(Violation::new("prior", format!("bad entry {:?}", e.type_profile)));
                continue;
            }
            prior[ts.index(&e.type_profile)] = Rational::new(e.num.into(), e.den.into());
        }
        let mut utilities = vec![None; ts.len() * acts.len()];
        for e in self.utilities {
            if !ts.contains(&e.type_profile) || !acts.contains(&e.action_profile) {
                extra.push(Violation::new(
                    "utilities",
                    format!("entry {:?}/{:?} out of range", e.type_profile, e.action_profile),
                ));
                continue;
            }
            utilities[ts.index(&e.type_profile) * acts.len() + acts.index(&e.action_profile)] =
                Some(e.payoffs);
        }
        let g = GameSpec::from_parts(self.types, self.actions, prior, utilities);
        extra.extend(g.validate());
        if extra.is_empty() {
            Ok(g)
        } else {
            Err(GameError::InvalidGame(extra))
        }
    }

    pub fn parse(s: &str) -> Result<GameSpec, GameError> {
        serde_json::from_str::<GameFile>(s)?.into_game()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuAtom {
    pub action_profile: Vec<usize>,
    #[serde(flatten, with = "serde_rat")]
    pub p: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuEntry {
    pub type_profile: Vec<usize>,
    pub dist: Vec<MuAtom>,
}

/// Sparse form of a correlated profile. Type profiles that are not listed
/// get no mass, which validation reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MuFile {
    pub schema: String,
    pub entries: Vec<MuEntry>,
}

impl MuFile {
    pub fn from_profile(g: &GameSpec, mu: &CorrelatedProfile) -> Self {
        let entries = g
            .types()
            .indices()
            .map(|t| MuEntry {
                type_profile: g.types().decode(t),
                dist: mu
                    .dist(t)
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !num::Zero::is_zero(*p))
                    .map(|(a, p)| MuAtom { action_profile: g.actions().decode(a), p: p.clone() })
                    .collect(),
            })
            .collect();
        MuFile { schema: MU_SCHEMA.into(), entries }
    }

    pub fn into_profile(self, g: &GameSpec) -> Result<CorrelatedProfile, GameError> {
        use crate::Violation;
        check_schema(&self.schema, MU_SCHEMA)?;
        let zero = Rational::from_integer(0.into());
        let mut dists = vec![vec![zero; g.actions().len()]; g.types().len()];
        let mut bad = Vec::new();
        for e in self.entries {
            if !g.types().contains(&e.type_profile) {
                bad.push(Violation::new("mu", format!("unknown type profile {:?}", e.type_profile)));
                continue;
            }
            let t = g.types().index(&e.type_profile);
            for atom in e.dist {
                if !g.actions().contains(&atom.action_profile) {
                    bad.push(Violation::new(
                        "mu",
                        format!("unknown action profile {:?}", atom.action_profile),
                    ));
                    continue;
                }
                dists[t][g.actions().index(&atom.action_profile)] += atom.p;
            }
        }
        let mu = CorrelatedProfile::new(dists);
        bad.extend(mu.validate(g));
        if bad.is_empty() {
            Ok(mu)
        } else {
            Err(GameError::InvalidProfile(bad))
        }
    }
}

/// `strategies[i][t_i]` lists player i's action probabilities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileFile {
    pub schema: String,
    pub strategies: Vec<Vec<Vec<RatCell>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatCell(#[serde(with = "serde_rat")] pub Rational);

impl ProfileFile {
    pub fn from_profile(s: &StrategyProfile) -> Self {
        ProfileFile {
            schema: PROFILE_SCHEMA.into(),
            strategies: s
                .strategies
                .iter()
                .map(|p| p.iter().map(|d| d.iter().cloned().map(RatCell).collect()).collect())
                .collect(),
        }
    }

    pub fn into_profile(self, g: &GameSpec) -> Result<StrategyProfile, GameError> {
        check_schema(&self.schema, PROFILE_SCHEMA)?;
        let s = StrategyProfile {
            strategies: self
                .strategies
                .into_iter()
                .map(|p| p.into_iter().map(|d| d.into_iter().map(|c| c.0).collect()).collect())
                .collect(),
        };
        let v = s.validate(g);
        if v.is_empty() {
            Ok(s)
        } else {
            Err(GameError::InvalidProfile(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn game_roundtrip() {
        let g = corpus::game_b();
        let s = serde_json::to_string(&GameFile::from_game(&g)).unwrap();
        let back = GameFile::parse(&s).unwrap();
        for t in g.types().indices() {
            assert_eq!(g.prior(t), back.prior(t));
            for a in g.actions().indices() {
                assert_eq!(g.payoffs(t, a), back.payoffs(t, a));
            }
        }
    }

    #[test]
    fn wrong_schema() {
        let g = corpus::game_b();
        let mut f = GameFile::from_game(&g);
        f.schema = "other".into();
        assert!(matches!(f.into_game(), Err(GameError::Schema { .. })));
    }

    #[test]
    fn mu_roundtrip() {
        let g = corpus::game_b();
        let mu = corpus::game_b_honest(&g);
        let s = serde_json::to_string(&MuFile::from_profile(&g, &mu)).unwrap();
        assert!(s.contains("\"num\":1"));
        let back = serde_json::from_str::<MuFile>(&s).unwrap().into_profile(&g).unwrap();
        assert_eq!(back, mu);
    }

    #[test]
    fn profile_roundtrip() {
        let g = corpus::game_b();
        let sp = StrategyProfile::pure(&g, |_, t| t);
        let s = serde_json::to_string(&ProfileFile::from_profile(&sp)).unwrap();
        let back = serde_json::from_str::<ProfileFile>(&s).unwrap().into_profile(&g).unwrap();
        assert_eq!(back, sp);
    }
}
