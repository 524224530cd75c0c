use mediatorless_game::{
    CoalitionMask, CorrelatedProfile, GameError, GameSpec, ProfileSpace, Rational,
    StrategyProfile,
};
use num::{Signed, Zero};

use crate::certificate::Weighted;
use crate::lp::{Cmp, Lp, LpOutcome};
use crate::{DeviationCertificate, DeviationKind, EqError, Payload, ResilienceMode, Verdict};

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Upper bound on enumerated deviations per coalition.
    pub budget: u128,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: 1_000_000 }
    }
}

fn certificate(
    coalition: &[usize],
    k: usize,
    kind: DeviationKind,
    payload: Payload,
    gains: &[Rational],
) -> DeviationCertificate {
    let (improved_players, gains) = coalition
        .iter()
        .zip(gains)
        .filter(|(_, g)| g.is_positive())
        .map(|(&i, g)| (i, g.clone()))
        .unzip();
    DeviationCertificate {
        coalition: coalition.to_vec(),
        k,
        kind,
        payload,
        improved_players,
        gains,
    }
}

fn validate_game(game: &GameSpec) -> Result<(), EqError> {
    let v = game.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(GameError::InvalidGame(v).into())
    }
}

fn validate_strategies(game: &GameSpec, profile: &StrategyProfile) -> Result<(), EqError> {
    let v = profile.validate(game);
    if v.is_empty() {
        Ok(())
    } else {
        Err(GameError::InvalidProfile(v).into())
    }
}

/// Coefficients for a coalition deviating from an independent profile:
/// `c[m][t_K][a_K] = Σ_{t ↦ t_K} q(t) Σ_{a_{−K}} σ_{−K}(a_{−K} | t) u_{K[m]}(t, a_K, a_{−K})`,
/// plus each member's baseline utility.
struct DeviationTable {
    coef: Vec<Vec<Vec<Rational>>>,
    base: Vec<Rational>,
    tk: ProfileSpace,
    ak: ProfileSpace,
}

fn deviation_table(game: &GameSpec, profile: &StrategyProfile, members: &[usize]) -> DeviationTable {
    let types = game.types();
    let acts = game.actions();
    let others: Vec<usize> = (0..game.players()).filter(|i| !members.contains(i)).collect();
    let tk = types.restrict(members);
    let ak = acts.restrict(members);
    let ao = acts.restrict(&others);
    let all: Vec<usize> = (0..game.players()).collect();
    let mut coef = vec![vec![vec![Rational::zero(); ak.len()]; tk.len()]; members.len()];
    let mut base = vec![Rational::zero(); members.len()];
    for t in types.indices() {
        let q = game.prior(t);
        if q.is_zero() {
            continue;
        }
        let tki = types.project(t, members, &tk);
        for oi in ao.indices() {
            let po = profile.joint_prob(game, t, &others, &ao, oi);
            if po.is_zero() {
                continue;
            }
            let w = q * &po;
            let partial = acts.replace(0, &others, &ao, oi);
            for aki in ak.indices() {
                let a = acts.replace(partial, members, &ak, aki);
                for (m, &i) in members.iter().enumerate() {
                    coef[m][tki][aki] += &w * game.utility(t, a, i);
                }
            }
        }
        for a in acts.indices() {
            let p = profile.joint_prob(game, t, &all, acts, a);
            if p.is_zero() {
                continue;
            }
            for (m, &i) in members.iter().enumerate() {
                base[m] += q * &p * game.utility(t, a, i);
            }
        }
    }
    DeviationTable { coef, base, tk, ak }
}

impl DeviationTable {
    fn gains_pure(&self, choice: &[usize]) -> Vec<Rational> {
        (0..self.base.len())
            .map(|m| {
                let v: Rational = choice.iter().enumerate().map(|(tki, &a)| &self.coef[m][tki][a]).sum();
                v - &self.base[m]
            })
            .collect()
    }

    fn gains_mixed(&self, x: &[Vec<Rational>]) -> Vec<Rational> {
        (0..self.base.len())
            .map(|m| {
                let mut v = Rational::zero();
                for (tki, row) in x.iter().enumerate() {
                    for (aki, p) in row.iter().enumerate() {
                        if !p.is_zero() {
                            v += p * &self.coef[m][tki][aki];
                        }
                    }
                }
                v - &self.base[m]
            })
            .collect()
    }

    /// Maximizes the minimum member gain over maps `T_K → Δ(A_K)`.
    fn max_min(&self) -> (Rational, Vec<Vec<Rational>>) {
        let nt = self.tk.len();
        let na = self.ak.len();
        let vars = nt * na + 2; // last two: z⁺, z⁻
        let mut lp = Lp::new(vars);
        lp.objective[vars - 2] = Rational::from_integer(1.into());
        lp.objective[vars - 1] = Rational::from_integer((-1).into());
        for t in 0..nt {
            let mut row = vec![Rational::zero(); vars];
            for a in 0..na {
                row[t * na + a] = Rational::from_integer(1.into());
            }
            lp.add_row(row, Cmp::Eq, Rational::from_integer(1.into()));
        }
        for m in 0..self.base.len() {
            // z − Σ c x ≤ −base
            let mut row = vec![Rational::zero(); vars];
            for t in 0..nt {
                for a in 0..na {
                    row[t * na + a] = -self.coef[m][t][a].clone();
                }
            }
            row[vars - 2] = Rational::from_integer(1.into());
            row[vars - 1] = Rational::from_integer((-1).into());
            lp.add_row(row, Cmp::Le, -self.base[m].clone());
        }
        match lp.maximize() {
            LpOutcome::Optimal { value, x } => {
                let table = (0..nt).map(|t| x[t * na..(t + 1) * na].to_vec()).collect();
                (value, table)
            }
            other => unreachable!("max-min program is feasible and bounded: {other:?}"),
        }
    }

    fn pure_count(&self) -> u128 {
        (self.ak.len() as u128).checked_pow(self.tk.len() as u32).unwrap_or(u128::MAX)
    }

    /// Odometer over pure maps `T_K → A_K`, first coordinate most significant.
    fn pure_maps(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let nt = self.tk.len();
        let na = self.ak.len();
        let mut cur: Option<Vec<usize>> = Some(vec![0; nt]);
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut i = nt;
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                next[i] += 1;
                if next[i] < na {
                    cur = Some(next);
                    break;
                }
                next[i] = 0;
            }
            Some(out)
        })
    }

    fn weighted(&self, row: &[Rational]) -> Vec<Weighted> {
        row.iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(a, p)| Weighted { profile: self.ak.decode(a), p: p.clone() })
            .collect()
    }
}

/// Searches one coalition. Pure maps are tried first (readable witnesses);
/// in resilient mode a max-min program then covers mixed joint deviations.
fn search_coalition(
    table: &DeviationTable,
    mode: ResilienceMode,
    opts: &CheckOptions,
) -> Result<Option<(Vec<Vec<Rational>>, Vec<Rational>)>, EqError> {
    let as_mixed = |choice: &[usize]| -> Vec<Vec<Rational>> {
        choice
            .iter()
            .map(|&a| {
                let mut r = vec![Rational::zero(); table.ak.len()];
                r[a] = Rational::from_integer(1.into());
                r
            })
            .collect()
    };
    let count = table.pure_count();
    match mode {
        ResilienceMode::Strong => {
            // Linear objective per member: best pure map per member suffices.
            for m in 0..table.base.len() {
                let choice: Vec<usize> = (0..table.tk.len())
                    .map(|t| {
                        let row = &table.coef[m][t];
                        let mut best = 0;
                        for a in 1..row.len() {
                            if row[a] > row[best] {
                                best = a;
                            }
                        }
                        best
                    })
                    .collect();
                let gains = table.gains_pure(&choice);
                if gains[m].is_positive() {
                    return Ok(Some((as_mixed(&choice), gains)));
                }
            }
            Ok(None)
        }
        ResilienceMode::Resilient => {
            if count <= opts.budget {
                for choice in table.pure_maps() {
                    let gains = table.gains_pure(&choice);
                    if mode.violated(&gains) {
                        return Ok(Some((as_mixed(&choice), gains)));
                    }
                }
            }
            let (z, x) = table.max_min();
            if z.is_positive() {
                let gains = table.gains_mixed(&x);
                debug_assert!(mode.violated(&gains));
                return Ok(Some((x, gains)));
            }
            Ok(None)
        }
    }
}

/// k-resilient Nash check of an independent mixed profile in a normal-form game.
pub fn check_k_nash(
    game: &GameSpec,
    profile: &StrategyProfile,
    k: usize,
    mode: ResilienceMode,
) -> Result<Verdict, EqError> {
    validate_game(game)?;
    if !game.is_normal_form() {
        return Err(EqError::NotNormalForm("check_k_nash"));
    }
    validate_strategies(game, profile)?;
    let opts = CheckOptions::default();
    for c in CoalitionMask::enumerate(game.players(), k) {
        let table = deviation_table(game, profile, c.members());
        if let Some((x, gains)) = search_coalition(&table, mode, &opts)? {
            let payload = Payload::JointMixed { dist: table.weighted(&x[0]) };
            return Ok(Verdict::Fail(certificate(
                c.members(),
                k,
                DeviationKind::NashJointMixed,
                payload,
                &gains,
            )));
        }
    }
    Ok(Verdict::Pass)
}

/// k-resilient Bayesian Nash check: coalitions pool their types and may
/// deviate with any map `T_K → Δ(A_K)`. One program per coalition covers all
/// pooled types jointly, since a member's gain sums over them.
pub fn check_k_bayesian_nash(
    game: &GameSpec,
    profile: &StrategyProfile,
    k: usize,
    mode: ResilienceMode,
) -> Result<Verdict, EqError> {
    check_k_bayesian_nash_with(game, profile, k, mode, &CheckOptions::default())
}

pub(crate) fn check_k_bayesian_nash_with(
    game: &GameSpec,
    profile: &StrategyProfile,
    k: usize,
    mode: ResilienceMode,
    opts: &CheckOptions,
) -> Result<Verdict, EqError> {
    validate_game(game)?;
    validate_strategies(game, profile)?;
    for c in CoalitionMask::enumerate(game.players(), k) {
        let table = deviation_table(game, profile, c.members());
        let vars = (table.tk.len() * table.ak.len()) as u128;
        if vars > opts.budget {
            return Err(EqError::TooLarge { needed: vars, budget: opts.budget });
        }
        if let Some((x, gains)) = search_coalition(&table, mode, opts)? {
            let map = x
                .iter()
                .enumerate()
                .map(|(t, row)| (table.tk.decode(t), table.weighted(row)))
                .collect();
            return Ok(Verdict::Fail(certificate(
                c.members(),
                k,
                DeviationKind::BayesianJointMixed,
                Payload::TypedJointMixed { map },
                &gains,
            )));
        }
    }
    Ok(Verdict::Pass)
}

/// k-resilient correlated equilibrium check of a distribution over action
/// profiles. Gains in the certificate are conditional on the recommendation.
pub fn check_k_correlated(
    game: &GameSpec,
    dist: &[Rational],
    k: usize,
    mode: ResilienceMode,
) -> Result<Verdict, EqError> {
    validate_game(game)?;
    if !game.is_normal_form() {
        return Err(EqError::NotNormalForm("check_k_correlated"));
    }
    CorrelatedProfile::new(vec![dist.to_vec()]).check(game)?;
    let acts = game.actions();
    for c in CoalitionMask::enumerate(game.players(), k) {
        let members = c.members();
        let ak = acts.restrict(members);
        let mut marg = vec![Rational::zero(); ak.len()];
        for (a, p) in dist.iter().enumerate() {
            marg[acts.project(a, members, &ak)] += p;
        }
        for rec in ak.indices() {
            if marg[rec].is_zero() {
                continue;
            }
            for swap in ak.indices() {
                if swap == rec {
                    continue;
                }
                let mut gains = vec![Rational::zero(); members.len()];
                for (a, p) in dist.iter().enumerate() {
                    if p.is_zero() || acts.project(a, members, &ak) != rec {
                        continue;
                    }
                    let b = acts.replace(a, members, &ak, swap);
                    for (m, &i) in members.iter().enumerate() {
                        gains[m] += p * (game.utility(0, b, i) - game.utility(0, a, i));
                    }
                }
                if mode.violated(&gains) {
                    let cond: Vec<Rational> = gains.iter().map(|g| g / &marg[rec]).collect();
                    return Ok(Verdict::Fail(certificate(
                        members,
                        k,
                        DeviationKind::CorrelatedSwap,
                        Payload::Swap { recommended: ak.decode(rec), swap_to: ak.decode(swap) },
                        &cond,
                    )));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Gains of members of `members` who hold types `true_tk`, report `reported`
/// and remap recommended sub-profiles with `phi` (indexed by sub-profile).
pub fn comm_deviation_gains(
    game: &GameSpec,
    mu: &CorrelatedProfile,
    members: &[usize],
    true_tk: &[usize],
    reported: &[usize],
    phi: &[usize],
) -> Vec<Rational> {
    let types = game.types();
    let acts = game.actions();
    let tk = types.restrict(members);
    let ak = acts.restrict(members);
    let true_i = tk.index(true_tk);
    let rep_i = tk.index(reported);
    let mut gains = vec![Rational::zero(); members.len()];
    for t in types.indices() {
        if types.project(t, members, &tk) != true_i || game.prior(t).is_zero() {
            continue;
        }
        let q = game.prior(t);
        let lied = types.replace(t, members, &tk, rep_i);
        for a in acts.indices() {
            let honest = mu.prob(t, a);
            let dev = mu.prob(lied, a);
            if !dev.is_zero() {
                let b = acts.replace(a, members, &ak, phi[acts.project(a, members, &ak)]);
                for (m, &i) in members.iter().enumerate() {
                    gains[m] += q * dev * game.utility(t, b, i);
                }
            }
            if !honest.is_zero() {
                for (m, &i) in members.iter().enumerate() {
                    gains[m] -= q * honest * game.utility(t, a, i);
                }
            }
        }
    }
    gains
}

/// k-resilient communication equilibrium check with deterministic misreports
/// and action remaps, enumerated exhaustively.
pub fn check_k_comm(
    game: &GameSpec,
    mu: &CorrelatedProfile,
    k: usize,
    mode: ResilienceMode,
) -> Result<Verdict, EqError> {
    check_k_comm_with(game, mu, k, mode, &CheckOptions::default())
}

pub fn check_k_comm_with(
    game: &GameSpec,
    mu: &CorrelatedProfile,
    k: usize,
    mode: ResilienceMode,
    opts: &CheckOptions,
) -> Result<Verdict, EqError> {
    validate_game(game)?;
    mu.check(game)?;
    let types = game.types();
    let acts = game.actions();
    for c in CoalitionMask::enumerate(game.players(), k) {
        let members = c.members();
        let tk = types.restrict(members);
        let ak = acts.restrict(members);
        let nphi = (ak.len() as u128).checked_pow(ak.len() as u32).unwrap_or(u128::MAX);
        let needed = nphi.saturating_mul((tk.len() * tk.len()) as u128);
        if needed > opts.budget {
            return Err(EqError::TooLarge { needed, budget: opts.budget });
        }
        let phi_space = ProfileSpace::new(vec![ak.len(); ak.len()]);
        let mut marginal = vec![Rational::zero(); tk.len()];
        for t in types.indices() {
            marginal[types.project(t, members, &tk)] += game.prior(t);
        }
        for true_i in tk.indices() {
            if marginal[true_i].is_zero() {
                continue;
            }
            let true_tk = tk.decode(true_i);
            for rep_i in tk.indices() {
                let reported = tk.decode(rep_i);
                for pi in phi_space.indices() {
                    let phi = phi_space.decode(pi);
                    let gains = comm_deviation_gains(game, mu, members, &true_tk, &reported, &phi);
                    if mode.violated(&gains) {
                        let phi_pairs =
                            phi.iter().enumerate().map(|(a, &b)| (ak.decode(a), ak.decode(b))).collect();
                        return Ok(Verdict::Fail(certificate(
                            members,
                            k,
                            DeviationKind::CommLieAndSwap,
                            Payload::LieAndSwap {
                                true_types: true_tk.clone(),
                                reported: reported.clone(),
                                phi: phi_pairs,
                            },
                            &gains,
                        )));
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass)
}
