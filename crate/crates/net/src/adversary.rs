//! Coalition adversaries as filters on the outgoing messages of corrupted
//! players. Corrupted players run the honest code; rules rewrite or drop
//! what actually leaves them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Body, NetError};

pub const ADVERSARY_SCHEMA: &str = "mediatorless-adversary-v1";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trigger {
    /// Step tag; `*` matches any run of characters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<usize>,
    /// Recipient; rules with a recipient never match broadcasts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<usize>,
    /// Body position the action touches; all positions when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Action {
    Drop,
    Set { value: u64 },
    Offset { value: u64 },
    /// Uniform in `[lo, hi)` from the script's seeded generator.
    Random { lo: u64, hi: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    #[serde(default)]
    pub when: Trigger,
    pub action: Action,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryScript {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub coalition: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    pub rules: Vec<Rule>,
}

impl Trigger {
    fn matches(&self, tag: &str, round: u32, from: usize, to: Option<usize>) -> bool {
        if self.tag.as_ref().is_some_and(|t| !glob(t, tag)) {
            return false;
        }
        if self.round_min.is_some_and(|r| round < r) || self.round_max.is_some_and(|r| round > r) {
            return false;
        }
        if self.from.is_some_and(|f| f != from) {
            return false;
        }
        match (self.to, to) {
            (Some(_), None) => false,
            (Some(a), Some(b)) => a == b,
            (None, _) => true,
        }
    }
}

fn glob(pattern: &str, s: &str) -> bool {
    let mut parts = pattern.split('*');
    let first = parts.next().unwrap_or("");
    let Some(mut rest) = s.strip_prefix(first) else { return false };
    let tail: Vec<&str> = parts.collect();
    let Some((last, middle)) = tail.split_last() else { return rest.is_empty() };
    for p in middle {
        match rest.find(p) {
            Some(i) => rest = &rest[i + p.len()..],
            None => return false,
        }
    }
    rest.len() >= last.len() && rest.ends_with(last)
}

impl AdversaryScript {
    pub fn new(name: &str, coalition: Vec<usize>, rules: Vec<Rule>) -> Self {
        AdversaryScript { schema: ADVERSARY_SCHEMA.into(), name: name.into(), coalition, seed: 0, rules }
    }

    /// Everyone honest.
    pub fn none() -> Self {
        Self::new("honest", vec![], vec![])
    }

    /// Coalition members send nothing from the tagged steps onward.
    pub fn silent(name: &str, members: Vec<usize>, tag: Option<&str>) -> Self {
        let rules = members
            .iter()
            .map(|&m| Rule {
                when: Trigger { tag: tag.map(str::to_string), from: Some(m), ..Default::default() },
                action: Action::Drop,
            })
            .collect();
        Self::new(name, members, rules)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, n: usize) -> Result<(), NetError> {
        if self.schema != ADVERSARY_SCHEMA {
            return Err(NetError::Script(format!("schema {:?}", self.schema)));
        }
        if let Some(&m) = self.coalition.iter().find(|&&m| m >= n) {
            return Err(NetError::Script(format!("coalition member {m} out of range")));
        }
        for r in &self.rules {
            match r.when.from {
                Some(f) if !self.coalition.contains(&f) => {
                    return Err(NetError::Script(format!("rule for honest sender {f}")))
                }
                _ => {}
            }
            if let Action::Random { lo, hi } = r.action {
                if lo >= hi {
                    return Err(NetError::Script("empty random range".into()));
                }
            }
        }
        Ok(())
    }

    pub fn parse(s: &str) -> Result<Self, NetError> {
        serde_json::from_str(s).map_err(|e| NetError::Script(e.to_string()))
    }

    pub fn is_corrupt(&self, i: usize) -> bool {
        self.coalition.contains(&i)
    }

    pub fn rng(&self, run_seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ run_seed.rotate_left(17) ^ 0x5eed_ad5e)
    }

    /// What actually leaves `from` when it intends to send `body`.
    pub fn filter(
        &self,
        rng: &mut ChaCha8Rng,
        tag: &str,
        round: u32,
        from: usize,
        to: Option<usize>,
        body: Option<&Body>,
    ) -> Option<Body> {
        let mut out = body.cloned();
        if !self.is_corrupt(from) {
            return out;
        }
        for r in &self.rules {
            if !r.when.matches(tag, round, from, to) {
                continue;
            }
            let Some(b) = out.as_mut() else { break };
            let idx: Vec<usize> = match r.when.index {
                Some(i) if i < b.len() => vec![i],
                Some(_) => vec![],
                None => (0..b.len()).collect(),
            };
            match &r.action {
                Action::Drop => {
                    out = None;
                    break;
                }
                Action::Set { value } => idx.iter().for_each(|&i| b[i] = *value),
                Action::Offset { value } => idx.iter().for_each(|&i| b[i] = b[i].wrapping_add(*value)),
                Action::Random { lo, hi } => idx.iter().for_each(|&i| b[i] = rng.gen_range(*lo..*hi)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let s = AdversaryScript::new(
            "x",
            vec![1],
            vec![Rule {
                when: Trigger { tag: Some("vss.*".into()), from: Some(1), to: Some(2), index: Some(0), ..Default::default() },
                action: Action::Offset { value: 3 },
            }],
        );
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"kind\":\"offset\""));
        assert_eq!(AdversaryScript::parse(&j).unwrap(), s);
        s.validate(4).unwrap();
    }

    #[test]
    fn honest_senders_untouched() {
        let s = AdversaryScript::silent("s", vec![0], None);
        let mut rng = s.rng(0);
        assert_eq!(s.filter(&mut rng, "a", 1, 1, Some(0), Some(&vec![5])), Some(vec![5]));
        assert_eq!(s.filter(&mut rng, "a", 1, 0, Some(1), Some(&vec![5])), None);
    }

    #[test]
    fn prefix_round_and_recipient() {
        let s = AdversaryScript::new(
            "x",
            vec![0],
            vec![Rule {
                when: Trigger { tag: Some("vss.*".into()), round_min: Some(3), to: Some(2), index: Some(1), ..Default::default() },
                action: Action::Set { value: 9 },
            }],
        );
        let mut rng = s.rng(0);
        let b = vec![1, 2, 3];
        assert_eq!(s.filter(&mut rng, "vss.row", 3, 0, Some(2), Some(&b)), Some(vec![1, 9, 3]));
        assert_eq!(s.filter(&mut rng, "vss.row", 2, 0, Some(2), Some(&b)), Some(b.clone()));
        assert_eq!(s.filter(&mut rng, "out", 3, 0, Some(2), Some(&b)), Some(b.clone()));
        assert_eq!(s.filter(&mut rng, "vss.row", 3, 0, None, Some(&b)), Some(b.clone()));
    }

    #[test]
    fn glob_patterns() {
        assert!(glob("vss.*", "vss.row"));
        assert!(glob("*.row", "mul1.reshare.row"));
        assert!(glob("mul*.syndrome", "mul3.syndrome"));
        assert!(glob("*", ""));
        assert!(!glob("*.row", "in.cross"));
        assert!(!glob("a*a", "a"));
        assert!(glob("exact", "exact"));
        assert!(!glob("exact", "exactly"));
    }

    #[test]
    fn rejects_rules_for_honest_players() {
        let mut s = AdversaryScript::silent("s", vec![0], None);
        s.rules[0].when.from = Some(3);
        assert!(s.validate(4).is_err());
    }
}
