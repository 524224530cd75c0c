use num::{One, Zero};

use crate::rational::Rational;
use crate::{CoalitionMask, GameError, GameSpec, ProfileSpace, Violation};

/// `μ : T → Δ(A)`, stored densely: one distribution over action-profile
/// indices per type-profile index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrelatedProfile {
    dists: Vec<Vec<Rational>>,
}

impl CorrelatedProfile {
    pub fn new(dists: Vec<Vec<Rational>>) -> Self {
        CorrelatedProfile { dists }
    }

    /// Point mass on `f(t)` for every type profile `t`.
    pub fn deterministic(game: &GameSpec, f: impl Fn(&[usize]) -> Vec<usize>) -> Self {
        let a = game.actions();
        let dists = game
            .types()
            .iter()
            .map(|t| {
                let mut d = vec![Rational::zero(); a.len()];
                d[a.index(&f(&t))] = Rational::one();
                d
            })
            .collect();
        CorrelatedProfile { dists }
    }

    /// The same distribution for every type profile (normal-form use).
    pub fn constant(game: &GameSpec, dist: Vec<Rational>) -> Self {
        CorrelatedProfile { dists: vec![dist; game.types().len()] }
    }

    pub fn from_fn(game: &GameSpec, f: impl Fn(&[usize]) -> Vec<Rational>) -> Self {
        CorrelatedProfile { dists: game.types().iter().map(|t| f(&t)).collect() }
    }

    pub fn dist(&self, type_idx: usize) -> &[Rational] {
        &self.dists[type_idx]
    }

    pub fn dists(&self) -> &[Vec<Rational>] {
        &self.dists
    }

    pub fn prob(&self, type_idx: usize, action_idx: usize) -> &Rational {
        &self.dists[type_idx][action_idx]
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Self, lambda: &Rational) -> Self {
        let rest = Rational::one() - lambda;
        let dists = self
            .dists
            .iter()
            .zip(&other.dists)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| lambda * x + &rest * y).collect())
            .collect();
        CorrelatedProfile { dists }
    }

    pub fn validate(&self, game: &GameSpec) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.dists.len() != game.types().len() {
            out.push(Violation::new(
                "mu",
                format!(
                    "{} type profiles covered, game has {}",
                    self.dists.len(),
                    game.types().len()
                ),
            ));
            return out;
        }
        for (t, d) in self.dists.iter().enumerate() {
            let tp = game.types().decode(t);
            if d.len() != game.actions().len() {
                out.push(Violation::new(
                    format!("mu{tp:?}"),
                    format!("{} action profiles, game has {}", d.len(), game.actions().len()),
                ));
                continue;
            }
            if d.iter().any(|p| p < &Rational::zero()) {
                out.push(Violation::new(format!("mu{tp:?}"), "negative probability"));
            }
            let s: Rational = d.iter().sum();
            if !s.is_one() {
                out.push(Violation::new(format!("mu{tp:?}"), format!("sums to {s}, not 1")));
            }
        }
        out
    }

    pub fn check(&self, game: &GameSpec) -> Result<(), GameError> {
        let v = self.validate(game);
        if v.is_empty() {
            Ok(())
        } else {
            Err(GameError::InvalidProfile(v))
        }
    }
}

/// Independent strategies: `strategies[i][t_i]` is player i's distribution
/// over `A_i` given its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyProfile {
    pub strategies: Vec<Vec<Vec<Rational>>>,
}

impl StrategyProfile {
    /// Every player plays the given pure action at every type.
    pub fn pure(game: &GameSpec, f: impl Fn(usize, usize) -> usize) -> Self {
        let strategies = (0..game.players())
            .map(|i| {
                (0..game.types().sizes()[i])
                    .map(|t| {
                        let mut d = vec![Rational::zero(); game.actions().sizes()[i]];
                        d[f(i, t)] = Rational::one();
                        d
                    })
                    .collect()
            })
            .collect();
        StrategyProfile { strategies }
    }

    pub fn validate(&self, game: &GameSpec) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.strategies.len() != game.players() {
            out.push(Violation::new("strategies", "one entry per player required"));
            return out;
        }
        for (i, s) in self.strategies.iter().enumerate() {
            if s.len() != game.types().sizes()[i] {
                out.push(Violation::new(format!("strategies[{i}]"), "one distribution per type"));
                continue;
            }
            for (t, d) in s.iter().enumerate() {
                let field = format!("strategies[{i}][{t}]");
                if d.len() != game.actions().sizes()[i] {
                    out.push(Violation::new(field, "wrong number of actions"));
                    continue;
                }
                if d.iter().any(|p| p < &Rational::zero()) {
                    out.push(Violation::new(field.clone(), "negative probability"));
                }
                let total: Rational = d.iter().sum();
                if !total.is_one() {
                    out.push(Violation::new(field, format!("sums to {total}, not 1")));
                }
            }
        }
        out
    }

    /// Probability that players in `members` play sub-profile `sub_idx`
    /// given type profile `type_idx`.
    pub fn joint_prob(
        &self,
        game: &GameSpec,
        type_idx: usize,
        members: &[usize],
        sub: &ProfileSpace,
        sub_idx: usize,
    ) -> Rational {
        let mut p = Rational::one();
        for (j, &m) in members.iter().enumerate() {
            let t = game.types().component(type_idx, m);
            let a = sub.component(sub_idx, j);
            p *= &self.strategies[m][t][a];
            if p.is_zero() {
                break;
            }
        }
        p
    }

    pub fn to_correlated(&self, game: &GameSpec) -> CorrelatedProfile {
        let all: Vec<usize> = (0..game.players()).collect();
        let acts = game.actions();
        CorrelatedProfile::from_fn(game, |t| {
            let ti = game.types().index(t);
            acts.indices().map(|a| self.joint_prob(game, ti, &all, acts, a)).collect()
        })
    }
}

fn check_domain(game: &GameSpec, mu: &CorrelatedProfile, player: usize) -> Result<(), GameError> {
    if player >= game.players() {
        return Err(GameError::DomainMismatch(format!(
            "player {player} out of range for {} players",
            game.players()
        )));
    }
    let v = mu.validate(game);
    if v.is_empty() {
        Ok(())
    } else {
        Err(GameError::DomainMismatch(
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
        ))
    }
}

fn conditional_payoff(game: &GameSpec, mu: &CorrelatedProfile, t: usize, player: usize) -> Rational {
    mu.dist(t)
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(a, p)| p * game.utility(t, a, player))
        .sum()
}

/// `Σ_t q(t) Σ_a μ(t)(a) u_i(t, a)`.
pub fn expected_utility(
    game: &GameSpec,
    mu: &CorrelatedProfile,
    player: usize,
) -> Result<Rational, GameError> {
    check_domain(game, mu, player)?;
    Ok(game
        .types()
        .indices()
        .filter(|t| !game.prior(*t).is_zero())
        .map(|t| game.prior(t) * conditional_payoff(game, mu, t, player))
        .sum())
}

/// `Σ_{t_K} q(t_K) Σ_t q(t | t_K) u_i(μ(t))`, where the coalition pools its types.
pub fn coalition_expected_utility(
    game: &GameSpec,
    mu: &CorrelatedProfile,
    coalition: &CoalitionMask,
    player: usize,
) -> Result<Rational, GameError> {
    if !coalition.contains(player) {
        return Err(GameError::NotInCoalition {
            player,
            members: coalition.members().to_vec(),
        });
    }
    check_domain(game, mu, player)?;
    let types = game.types();
    let sub = types.restrict(coalition.members());
    let mut marginal = vec![Rational::zero(); sub.len()];
    for t in types.indices() {
        marginal[types.project(t, coalition.members(), &sub)] += game.prior(t);
    }
    let mut total = Rational::zero();
    for (tk, qk) in marginal.iter().enumerate() {
        if qk.is_zero() {
            continue;
        }
        let mut inner = Rational::zero();
        for t in types.indices() {
            if types.project(t, coalition.members(), &sub) != tk || game.prior(t).is_zero() {
                continue;
            }
            let cond = game.prior(t) / qk;
            inner += cond * conditional_payoff(game, mu, t, player);
        }
        total += qk * inner;
    }
    Ok(total)
}
