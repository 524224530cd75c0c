use mediatorless_net::bracha::{broadcast_async, broadcast_sync, TAG_ECHO, TAG_INIT, TAG_READY};
use mediatorless_net::consensus::{consensus_async, consensus_sync};
use mediatorless_net::race::{play_race, race_game_demo, race_payoffs, RaceExamplePolicy};
use mediatorless_net::{Action, AdversaryScript, RandomPolicy, Rule, Trigger};

fn set_init(to: usize, value: u64) -> Rule {
    Rule {
        when: Trigger { tag: Some(TAG_INIT.into()), from: Some(0), to: Some(to), index: Some(2), ..Default::default() },
        action: Action::Set { value },
    }
}

fn drop_init(to: usize) -> Rule {
    Rule {
        when: Trigger { tag: Some(TAG_INIT.into()), from: Some(0), to: Some(to), ..Default::default() },
        action: Action::Drop,
    }
}

/// Every way a faulty origin can split its INIT across the three other
/// players, combined with several behaviours for its own echo/ready traffic.
fn two_faced_scripts() -> Vec<AdversaryScript> {
    let tails: Vec<Vec<Rule>> = vec![
        vec![],
        vec![Rule { when: Trigger { tag: Some("rb.e*".into()), ..Default::default() }, action: Action::Drop }],
        vec![Rule { when: Trigger { tag: Some(TAG_READY.into()), ..Default::default() }, action: Action::Drop }],
        vec![Rule {
            when: Trigger { tag: Some(TAG_ECHO.into()), index: Some(2), ..Default::default() },
            action: Action::Random { lo: 0, hi: 2 },
        }],
        vec![Rule {
            when: Trigger { tag: Some(TAG_READY.into()), index: Some(2), ..Default::default() },
            action: Action::Random { lo: 0, hi: 2 },
        }],
    ];
    let mut out = Vec::new();
    for pattern in 0..27u32 {
        for tail in &tails {
            let mut rules = Vec::new();
            let mut p = pattern;
            for to in 1..4 {
                match p % 3 {
                    0 => rules.push(drop_init(to)),
                    v => rules.push(set_init(to, v as u64 - 1)),
                }
                p /= 3;
            }
            for r in tail {
                let mut r = r.clone();
                r.when.from = Some(0);
                rules.push(r);
            }
            out.push(AdversaryScript::new("two-faced", vec![0], rules));
        }
    }
    out
}

fn honest_views_agree(views: &[Vec<Option<Vec<u64>>>], corrupt: &[usize]) -> bool {
    let honest: Vec<_> = (0..views.len()).filter(|i| !corrupt.contains(i)).collect();
    honest.windows(2).all(|w| views[w[0]] == views[w[1]])
}

#[test]
fn honest_broadcast_delivers_everywhere() {
    for n in 4..=5 {
        let inputs: Vec<_> = (0..n).map(|i| Some(vec![10 + i as u64])).collect();
        let views = broadcast_sync(1, inputs.clone(), AdversaryScript::none(), 0).unwrap();
        assert!(views.iter().all(|v| *v == inputs));
        let views = broadcast_async(1, inputs.clone(), &AdversaryScript::none(), &mut RandomPolicy::new(3), 3).unwrap();
        assert!(views.iter().all(|v| *v == inputs));
    }
}

#[test]
fn no_resilience_means_direct_send() {
    let inputs = vec![Some(vec![5]), None, Some(vec![6])];
    let views = broadcast_sync(0, inputs.clone(), AdversaryScript::none(), 0).unwrap();
    assert!(views.iter().all(|v| *v == inputs));
}

#[test]
fn two_faced_origin_cannot_split_honest_players() {
    let mut delivered = 0;
    for (i, script) in two_faced_scripts().into_iter().enumerate() {
        let inputs = vec![Some(vec![0]), Some(vec![1]), Some(vec![2]), Some(vec![3])];
        let views = broadcast_sync(1, inputs.clone(), script.clone().with_seed(i as u64), i as u64).unwrap();
        assert!(honest_views_agree(&views, &[0]), "sync split under script {i}");
        for j in 1..4 {
            assert_eq!(views[j][1..], inputs[1..], "honest origins always delivered");
        }
        delivered += views[1][0].is_some() as usize;
        for seed in 0..4 {
            let views =
                broadcast_async(1, inputs.clone(), &script, &mut RandomPolicy::new(seed), seed ^ i as u64).unwrap();
            assert!(honest_views_agree(&views, &[0]), "async split under script {i}");
        }
    }
    // Some patterns deliver, others end in ⊥.
    assert!(delivered > 0 && delivered < 135);
}

fn byzantine(seed: u64, who: usize) -> AdversaryScript {
    let rules = match seed % 4 {
        0 => vec![Rule {
            when: Trigger { from: Some(who), index: Some(2), ..Default::default() },
            action: Action::Random { lo: 0, hi: 5 },
        }],
        1 => vec![
            Rule { when: Trigger { from: Some(who), index: Some(2), ..Default::default() }, action: Action::Offset { value: 1 } },
            Rule { when: Trigger { from: Some(who), index: Some(1), ..Default::default() }, action: Action::Set { value: 0 } },
        ],
        2 => vec![Rule {
            when: Trigger { from: Some(who), round_min: Some(3), ..Default::default() },
            action: Action::Drop,
        }],
        _ => vec![Rule { when: Trigger { from: Some(who), ..Default::default() }, action: Action::Random { lo: 0, hi: 6 } }],
    };
    AdversaryScript::new("flip", vec![who], rules).with_seed(seed)
}

fn check_agreement(out: &[Option<bool>], who: usize, prefs: &[bool]) {
    let honest: Vec<bool> = (0..out.len()).filter(|&i| i != who).map(|i| out[i].expect("honest terminates")).collect();
    assert!(honest.windows(2).all(|w| w[0] == w[1]), "disagreement {out:?}");
    let hp: Vec<bool> = (0..prefs.len()).filter(|&i| i != who).map(|i| prefs[i]).collect();
    if hp.iter().all(|&p| p == hp[0]) {
        assert_eq!(honest[0], hp[0], "unanimous honest preference must win");
    }
}

#[test]
fn unanimous_preference_is_decided() {
    for n in 4..=5 {
        let prefs = vec![true; n];
        let out = consensus_sync(1, &prefs, AdversaryScript::none(), 0).unwrap();
        assert!(out.iter().all(|&o| o == Some(true)));
    }
}

#[test]
fn split_preferences_still_agree() {
    for seed in 0..50 {
        let prefs = [true, false, true, false];
        let out = consensus_async(1, &prefs, &AdversaryScript::none(), &mut RandomPolicy::new(seed), seed).unwrap();
        check_agreement(&out, usize::MAX, &prefs);
    }
}

#[test]
fn byzantine_battery_sync_and_async() {
    for seed in 0..1000u64 {
        let n = 4 + (seed % 2) as usize;
        let who = (seed / 2) as usize % n;
        let prefs: Vec<bool> = (0..n).map(|i| (seed >> (i + 3)) & 1 == 1).collect();
        let script = byzantine(seed, who);
        let out = consensus_sync(1, &prefs, script.clone(), seed).unwrap();
        check_agreement(&out, who, &prefs);
        let out = consensus_async(1, &prefs, &script, &mut RandomPolicy::new(seed), seed).unwrap();
        check_agreement(&out, who, &prefs);
    }
}

#[test]
fn race_payoff_rule() {
    assert_eq!(race_payoffs(&[2, 2, 2]), vec![0, 0, 1]);
    assert_eq!(race_payoffs(&[0, 1, 2]), vec![1, 1, 1]);
}

#[test]
fn lone_double_sender_always_wins() {
    for seed in 0..200 {
        let actions = play_race(4, &[2], &mut RaceExamplePolicy::new(4, seed), seed).unwrap();
        assert_eq!(actions, vec![2; 4]);
    }
}

#[test]
fn race_demo_shows_the_gain() {
    let runs = 4000;
    let r = race_game_demo(4, runs, 1).unwrap();
    let tol = 4.0 * (0.25f64 * 0.75 / runs as f64).sqrt();
    for &f in &r.honest_random {
        assert!((f - 0.25).abs() < tol, "{:?}", r.honest_random);
    }
    assert_eq!(r.single_deviator[0], 1.0);
    assert!(r.deviator_gain() > 0.5);
    for &f in &r.all_deviate {
        assert!((f - 0.25).abs() < tol, "{:?}", r.all_deviate);
    }
}
