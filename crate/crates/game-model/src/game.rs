use num::{One, Zero};

use crate::rational::Rational;
use crate::{GameError, ProfileSpace, Violation};

/// A finite Bayesian game with exact rational prior and payoffs.
#[derive(Clone, Debug)]
pub struct GameSpec {
    type_labels: Vec<Vec<String>>,
    action_labels: Vec<Vec<String>>,
    types: ProfileSpace,
    actions: ProfileSpace,
    prior: Vec<Rational>,
    // indexed by type_profile * |A| + action_profile
    utilities: Vec<Option<Vec<Rational>>>,
}

fn default_labels(sizes: &[usize]) -> Vec<Vec<String>> {
    sizes.iter().map(|&m| (0..m).map(|v| v.to_string()).collect()).collect()
}

impl GameSpec {
    /// Builds a game from explicit labels, a dense prior and sparse utilities.
    /// Nothing is checked here; call [`GameSpec::validate`].
    pub fn from_parts(
        type_labels: Vec<Vec<String>>,
        action_labels: Vec<Vec<String>>,
        prior: Vec<Rational>,
        utilities: Vec<Option<Vec<Rational>>>,
    ) -> Self {
        let types = ProfileSpace::new(type_labels.iter().map(Vec::len).collect());
        let actions = ProfileSpace::new(action_labels.iter().map(Vec::len).collect());
        GameSpec { type_labels, action_labels, types, actions, prior, utilities }
    }

    /// Bayesian game from sizes, a prior function and a payoff function.
    pub fn bayesian(
        type_sizes: &[usize],
        action_sizes: &[usize],
        prior: impl Fn(&[usize]) -> Rational,
        payoff: impl Fn(&[usize], &[usize]) -> Vec<Rational>,
    ) -> Result<Self, GameError> {
        let types = ProfileSpace::new(type_sizes.to_vec());
        let actions = ProfileSpace::new(action_sizes.to_vec());
        let prior_vec = types.iter().map(|t| prior(&t)).collect();
        let mut utilities = Vec::with_capacity(types.len() * actions.len());
        for t in types.iter() {
            for a in actions.iter() {
                utilities.push(Some(payoff(&t, &a)));
            }
        }
        let g = Self::from_parts(
            default_labels(type_sizes),
            default_labels(action_sizes),
            prior_vec,
            utilities,
        );
        g.checked()
    }

    /// Normal-form game: every type set is a singleton.
    pub fn normal_form(
        action_sizes: &[usize],
        payoff: impl Fn(&[usize]) -> Vec<Rational>,
    ) -> Result<Self, GameError> {
        let ones = vec![1; action_sizes.len()];
        Self::bayesian(&ones, action_sizes, |_| Rational::one(), |_, a| payoff(a))
    }

    pub fn checked(self) -> Result<Self, GameError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(GameError::InvalidGame(v))
        }
    }

    /// Lists every broken invariant; empty iff the game is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.players();
        if n == 0 {
            out.push(Violation::new("players", "need at least one player"));
        }
        if self.type_labels.len() != self.action_labels.len() {
            out.push(Violation::new(
                "types",
                format!(
                    "{} type sets for {} action sets",
                    self.type_labels.len(),
                    self.action_labels.len()
                ),
            ));
            return out;
        }
        for (i, t) in self.type_labels.iter().enumerate() {
            if t.is_empty() {
                out.push(Violation::new(format!("types[{i}]"), "empty type set"));
            }
        }
        for (i, a) in self.action_labels.iter().enumerate() {
            if a.is_empty() {
                out.push(Violation::new(format!("actions[{i}]"), "empty action set"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        if self.prior.len() != self.types.len() {
            out.push(Violation::new(
                "prior",
                format!("{} entries for {} type profiles", self.prior.len(), self.types.len()),
            ));
        } else {
            for (idx, p) in self.prior.iter().enumerate() {
                if p < &Rational::zero() {
                    out.push(Violation::new(
                        "prior",
                        format!("negative probability {p} at {:?}", self.types.decode(idx)),
                    ));
                }
            }
            let total: Rational = self.prior.iter().sum();
            if !total.is_one() {
                out.push(Violation::new("prior", format!("sums to {total}, not 1")));
            }
        }
        let expected = self.types.len() * self.actions.len();
        if self.utilities.len() != expected {
            out.push(Violation::new(
                "utilities",
                format!("{} slots for {expected} (type, action) pairs", self.utilities.len()),
            ));
            return out;
        }
        for (slot, u) in self.utilities.iter().enumerate() {
            let t = self.types.decode(slot / self.actions.len());
            let a = self.actions.decode(slot % self.actions.len());
            match u {
                None => out.push(Violation::new(
                    "utilities",
                    format!("missing entry for type profile {t:?}, action profile {a:?}"),
                )),
                Some(v) if v.len() != n => out.push(Violation::new(
                    "utilities",
                    format!("{} payoffs for type profile {t:?}, action profile {a:?}", v.len()),
                )),
                _ => {}
            }
        }
        out
    }

    pub fn players(&self) -> usize {
        self.action_labels.len()
    }

    pub fn types(&self) -> &ProfileSpace {
        &self.types
    }

    pub fn actions(&self) -> &ProfileSpace {
        &self.actions
    }

    pub fn type_labels(&self) -> &[Vec<String>] {
        &self.type_labels
    }

    pub fn action_labels(&self) -> &[Vec<String>] {
        &self.action_labels
    }

    pub fn is_normal_form(&self) -> bool {
        self.types.len() == 1
    }

    pub fn prior(&self, type_idx: usize) -> &Rational {
        &self.prior[type_idx]
    }

    pub fn prior_vec(&self) -> &[Rational] {
        &self.prior
    }

    /// Payoff vector at (type profile index, action profile index).
    /// Panics on a missing entry; validated games have none.
    pub fn payoffs(&self, type_idx: usize, action_idx: usize) -> &[Rational] {
        self.utilities[type_idx * self.actions.len() + action_idx]
            .as_deref()
            .expect("utility entry missing; validate the game first")
    }

    pub fn utility(&self, type_idx: usize, action_idx: usize, player: usize) -> &Rational {
        &self.payoffs(type_idx, action_idx)[player]
    }

    #[cfg(test)]
    pub(crate) fn raw_utilities(&self) -> &[Option<Vec<Rational>>] {
        &self.utilities
    }

    /// Marginal prior of player `i` over its own types.
    pub fn marginal(&self, i: usize) -> Vec<Rational> {
        let mut m = vec![Rational::zero(); self.types.sizes()[i]];
        for t in self.types.indices() {
            m[self.types.component(t, i)] += &self.prior[t];
        }
        m
    }
}
