use mediatorless_equilibrium::{
    build_sampler, check_k_bayesian_nash, check_k_comm, check_k_correlated, check_k_nash,
    comm_deviation_gains, find_punishment_equilibrium, CheckOptions, DeviationKind, EqError,
    Payload, ResilienceMode::*, Verdict,
};
use mediatorless_game::rational::{int, ratio};
use mediatorless_game::{corpus, CorrelatedProfile, GameSpec, Rational, StrategyProfile};
use num::Signed;

fn all_zero(g: &GameSpec) -> StrategyProfile {
    StrategyProfile::pure(g, |_, _| 0)
}

#[test]
fn game_a_nash_k1_passes() {
    let g = corpus::game_a(3);
    assert_eq!(check_k_nash(&g, &all_zero(&g), 1, Resilient).unwrap(), Verdict::Pass);
}

#[test]
fn game_a_nash_k2_pair_plays_one() {
    let g = corpus::game_a(3);
    let v = check_k_nash(&g, &all_zero(&g), 2, Resilient).unwrap();
    let c = v.certificate().expect("violation");
    assert_eq!(c.coalition, vec![0, 1]);
    assert_eq!(c.kind, DeviationKind::NashJointMixed);
    match &c.payload {
        Payload::JointMixed { dist } => {
            assert_eq!(dist.len(), 1);
            assert_eq!(dist[0].profile, vec![1, 1]);
            assert_eq!(dist[0].p, int(1));
        }
        p => panic!("{p:?}"),
    }
    assert_eq!(c.improved_players, vec![0, 1]);
    assert_eq!(c.gains, vec![int(1), int(1)]);
}

#[test]
fn k_zero_is_vacuous() {
    let g = corpus::prisoners_dilemma();
    let s = StrategyProfile::pure(&g, |_, _| 0);
    assert!(check_k_nash(&g, &s, 0, Resilient).unwrap().is_pass());
    assert!(check_k_nash(&g, &s, 0, Strong).unwrap().is_pass());
}

#[test]
fn bayesian_game_rejected_by_nash_check() {
    let g = corpus::game_b();
    let s = StrategyProfile::pure(&g, |_, t| t);
    assert!(matches!(check_k_nash(&g, &s, 1, Resilient), Err(EqError::NotNormalForm(_))));
}

/// No pure joint deviation helps both members, but the even mixture of the
/// two off-diagonal profiles gives each +1/2.
#[test]
fn mixed_joint_deviation_found_by_program() {
    let g = GameSpec::normal_form(&[2, 2], |a| match (a[0], a[1]) {
        (0, 0) => vec![int(0), int(0)],
        (0, 1) => vec![int(2), int(-1)],
        (1, 0) => vec![int(-1), int(2)],
        _ => vec![int(-1), int(-1)],
    })
    .unwrap();
    let s = all_zero(&g);
    assert!(check_k_nash(&g, &s, 1, Resilient).unwrap().is_pass());
    let v = check_k_nash(&g, &s, 2, Resilient).unwrap();
    let c = v.certificate().unwrap();
    let Payload::JointMixed { dist } = &c.payload else { panic!() };
    // oracle: recompute member gains from the witness distribution
    for i in 0..2 {
        let gain: Rational =
            dist.iter().map(|w| &w.p * g.utility(0, g.actions().index(&w.profile), i)).sum();
        assert!(gain.is_positive());
    }
    assert_eq!(c.gains, vec![ratio(1, 2), ratio(1, 2)]);
    // strong mode: (0,1) already helps player 0
    assert!(!check_k_nash(&g, &s, 2, Strong).unwrap().is_pass());
}

#[test]
fn coordination_correlated_passes() {
    let g = corpus::coordination();
    let d = vec![ratio(1, 2), int(0), int(0), ratio(1, 2)];
    assert!(check_k_correlated(&g, &d, 1, Resilient).unwrap().is_pass());
    assert!(check_k_correlated(&g, &d, 1, Strong).unwrap().is_pass());
}

#[test]
fn game_a_correlated_k2_swaps_to_ones() {
    let g = corpus::game_a(3);
    let mut d = vec![int(0); 8];
    d[0] = int(1);
    let v = check_k_correlated(&g, &d, 2, Resilient).unwrap();
    let c = v.certificate().unwrap();
    assert_eq!(c.coalition.len(), 2);
    assert_eq!(c.kind, DeviationKind::CorrelatedSwap);
    assert_eq!(c.payload, Payload::Swap { recommended: vec![0, 0], swap_to: vec![1, 1] });
    assert!(check_k_correlated(&g, &d, 1, Resilient).unwrap().is_pass());
}

#[test]
fn dominated_profile_swap_matches_brute_force() {
    let g = corpus::prisoners_dilemma();
    let mut d = vec![int(0); 4];
    d[0] = int(1); // (C, C)
    let v = check_k_correlated(&g, &d, 1, Resilient).unwrap();
    let c = v.certificate().unwrap();
    // brute force: the first single-player swap that strictly helps
    let mut expected = None;
    'outer: for i in 0..2 {
        for b in 0..2 {
            let mut prof = vec![0, 0];
            prof[i] = b;
            let gain = g.utility(0, g.actions().index(&prof), i) - g.utility(0, 0, i);
            if gain.is_positive() {
                expected = Some((i, b, gain));
                break 'outer;
            }
        }
    }
    let (i, b, gain) = expected.unwrap();
    assert_eq!(c.coalition, vec![i]);
    assert_eq!(c.payload, Payload::Swap { recommended: vec![0], swap_to: vec![b] });
    assert_eq!(c.gains, vec![gain]);
}

#[test]
fn correlated_rejects_bad_distribution() {
    let g = corpus::coordination();
    assert!(check_k_correlated(&g, &[int(1)], 1, Resilient).is_err());
}

#[test]
fn game_b_honest_is_comm_equilibrium() {
    let g = corpus::game_b();
    let mu = corpus::game_b_honest(&g);
    assert!(check_k_comm(&g, &mu, 1, Resilient).unwrap().is_pass());
    assert!(check_k_comm(&g, &mu, 2, Strong).unwrap().is_pass());
}

#[test]
fn game_b_flipped_recommendation_certificate() {
    let g = corpus::game_b();
    let mu = CorrelatedProfile::deterministic(&g, |t| vec![1 - t[0] * t[1]; 2]);
    let v = check_k_comm(&g, &mu, 1, Resilient).unwrap();
    let c = v.certificate().unwrap();
    let Payload::LieAndSwap { true_types, reported, phi } = &c.payload else { panic!() };
    assert_eq!(true_types, reported, "identity misreport");
    // Under the flipped rule at t_1 = 0 the only recommendation is 1, so the
    // witness must undo it exactly as the bit flip does there.
    assert_eq!(true_types, &vec![0]);
    assert!(phi.contains(&(vec![1], vec![0])));
    assert!(c.gains.iter().all(|x| x.is_positive()));
    // the bit flip itself, checked at both own types
    for t in 0..2 {
        let gains = comm_deviation_gains(&g, &mu, &[0], &[t], &[t], &[1, 0]);
        assert!(gains[0].is_positive());
    }
}

#[test]
fn constant_utilities_always_pass() {
    let g = corpus::constant(&[2, 2], &[2, 2], 5);
    let mu = CorrelatedProfile::from_fn(&g, |t| {
        let mut d = vec![int(0); 4];
        d[t[0] + 2 * t[1]] = int(1);
        d
    });
    for k in 0..=2 {
        assert!(check_k_comm(&g, &mu, k, Resilient).unwrap().is_pass());
        assert!(check_k_comm(&g, &mu, k, Strong).unwrap().is_pass());
    }
    let s = StrategyProfile::pure(&g, |i, t| (i + t) % 2);
    assert!(check_k_bayesian_nash(&g, &s, 2, Resilient).unwrap().is_pass());
}

#[test]
fn comm_budget_enforced() {
    let g = GameSpec::normal_form(&[4, 4], |_| vec![int(0), int(0)]).unwrap();
    let mu = CorrelatedProfile::constant(&g, {
        let mut d = vec![int(0); 16];
        d[0] = int(1);
        d
    });
    // |A_K|^|A_K| = 16^16 for the pair
    assert!(matches!(check_k_comm(&g, &mu, 2, Resilient), Err(EqError::TooLarge { .. })));
}

#[test]
fn game_b_truthful_product_is_bayesian_nash() {
    let g = corpus::game_b();
    let s = StrategyProfile::pure(&g, |_, t| t);
    assert!(check_k_bayesian_nash(&g, &s, 1, Resilient).unwrap().is_pass());
    assert!(check_k_bayesian_nash(&g, &s, 1, Strong).unwrap().is_pass());
}

#[test]
fn game_b_player_one_misplays() {
    let g = corpus::game_b();
    // player 1 plays the opposite of its type; player 2 stays truthful
    let s = StrategyProfile::pure(&g, |i, t| if i == 0 { 1 - t } else { t });
    let v = check_k_bayesian_nash(&g, &s, 1, Resilient).unwrap();
    let c = v.certificate().unwrap();
    assert_eq!(c.coalition, vec![0]);
    assert_eq!(c.improved_players, vec![0]);
    // oracle: best pure map T_1 → A_1 by enumeration
    let base = ratio(1, 4);
    let mut best = int(0);
    for m0 in 0..2 {
        for m1 in 0..2 {
            let alt = StrategyProfile::pure(&g, |i, t| {
                if i == 0 {
                    [m0, m1][t]
                } else {
                    t
                }
            });
            let u = mediatorless_game::expected_utility(&g, &alt.to_correlated(&g), 0).unwrap();
            if u > best {
                best = u;
            }
        }
    }
    assert_eq!(best, ratio(3, 4));
    assert!(c.gains[0] <= &best - &base);
    assert!(c.gains[0].is_positive());
}

#[test]
fn prisoners_dilemma_punishment_is_defection() {
    let g = corpus::prisoners_dilemma();
    let mu = CorrelatedProfile::deterministic(&g, |_| vec![0, 0]);
    let p = find_punishment_equilibrium(&g, &mu, 1, &CheckOptions::default()).unwrap().unwrap();
    assert_eq!(p, StrategyProfile::pure(&g, |_, _| 1));
}

#[test]
fn constant_game_has_no_punishment() {
    let g = corpus::constant(&[1, 1], &[2, 2], 3);
    let mu = CorrelatedProfile::deterministic(&g, |_| vec![0, 0]);
    assert!(find_punishment_equilibrium(&g, &mu, 1, &CheckOptions::default()).unwrap().is_none());
}

#[test]
fn game_b_punishment_matches_enumeration() {
    let g = corpus::game_b();
    let mu = corpus::game_b_honest(&g);
    let found = find_punishment_equilibrium(&g, &mu, 1, &CheckOptions::default()).unwrap();
    // oracle: walk all 16 pure maps in the same order
    let mut expected = None;
    for code in 0..16usize {
        let digits = [(code >> 3) & 1, (code >> 2) & 1, (code >> 1) & 1, code & 1];
        let s = StrategyProfile::pure(&g, |i, t| digits[2 * i + t]);
        let c = s.to_correlated(&g);
        let worse = (0..2).all(|i| mediatorless_game::expected_utility(&g, &c, i).unwrap() < int(1));
        if worse && check_k_bayesian_nash(&g, &s, 1, Resilient).unwrap().is_pass() {
            expected = Some(s);
            break;
        }
    }
    assert_eq!(found, expected);
    let p = found.unwrap();
    assert_eq!(p, StrategyProfile::pure(&g, |_, _| 0));
    let u = mediatorless_game::expected_utility(&g, &p.to_correlated(&g), 0).unwrap();
    assert_eq!(u, ratio(3, 4));
}

#[test]
fn sampler_single_profile_recount() {
    let g = corpus::coordination();
    let mu = CorrelatedProfile::constant(&g, vec![ratio(1, 3), int(0), int(0), ratio(2, 3)]);
    let s = build_sampler(&mu).unwrap();
    assert_eq!(s.modulus, 3);
    let decoded: Vec<Vec<usize>> = s.table[0].iter().map(|&a| g.actions().decode(a)).collect();
    assert_eq!(decoded, vec![vec![0, 0], vec![1, 1], vec![1, 1]]);
    assert!(s.frequencies(0, 4).iter().zip(mu.dist(0)).all(|(a, b)| a == b));
}
