use mediatorless_game::rational::{serde_rat, serde_rat_vec};
use mediatorless_game::Rational;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeviationKind {
    NashJointMixed,
    BayesianJointMixed,
    CorrelatedSwap,
    CommLieAndSwap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Weighted {
    pub profile: Vec<usize>,
    #[serde(with = "serde_rat")]
    pub p: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Payload {
    /// Joint distribution over the coalition's action sub-profiles.
    JointMixed { dist: Vec<Weighted> },
    /// For each pooled coalition type sub-profile, a joint distribution.
    TypedJointMixed { map: Vec<(Vec<usize>, Vec<Weighted>)> },
    /// Replace recommendation `recommended` by `swap_to`.
    Swap { recommended: Vec<usize>, swap_to: Vec<usize> },
    /// Report `reported` instead of `true_types`, then remap actions with `phi`.
    LieAndSwap {
        true_types: Vec<usize>,
        reported: Vec<usize>,
        phi: Vec<(Vec<usize>, Vec<usize>)>,
    },
}

/// Witness that a coalition has a profitable deviation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeviationCertificate {
    pub coalition: Vec<usize>,
    pub k: usize,
    pub kind: DeviationKind,
    pub payload: Payload,
    pub improved_players: Vec<usize>,
    #[serde(with = "serde_rat_vec")]
    pub gains: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail(DeviationCertificate),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn certificate(&self) -> Option<&DeviationCertificate> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(c) => Some(c),
        }
    }
}
