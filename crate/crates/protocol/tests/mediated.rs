use mediatorless_game::corpus::{coordination, game_b, game_b_honest, product_game, product_honest};
use mediatorless_game::rational::{int, ratio, to_f64};
use mediatorless_game::{CorrelatedProfile, GameSpec, Rational, StrategyProfile};
use mediatorless_net::{Action, AdversaryScript, FifoPolicy, Rule, ScriptStep, ScriptedPolicy, Trigger};
use mediatorless_protocol::{
    best_response_fallback, joint_uniform_fraction, joint_uniform_sample, run_async_mediator_game,
    run_mediator_game, MediatorRule, ProtocolConfig,
};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Splits `den` into `parts` non-negative numerators.
fn random_dist(rng: &mut impl Rng, parts: usize, den: i64) -> Vec<Rational> {
    let mut cuts: Vec<i64> = (0..parts - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    cuts.push(den);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let p = ratio(c - prev, den);
            prev = c;
            p
        })
        .collect()
}

fn tv(counts: &[u64], runs: u64, exact: &[Rational]) -> f64 {
    counts.iter().zip(exact).map(|(&c, p)| (c as f64 / runs as f64 - to_f64(p)).abs()).sum::<f64>() / 2.0
}

#[test]
fn game_b_honest_mediator() {
    let g = game_b();
    let cfg = ProtocolConfig::new(g.clone(), game_b_honest(&g), 0).unwrap();
    let both = run_mediator_game(&cfg, &AdversaryScript::none(), &[1, 1], 1).unwrap();
    assert_eq!(both.actions, vec![1, 1]);
    assert_eq!(both.payoffs, vec![int(1), int(1)]);
    let mixed = run_mediator_game(&cfg, &AdversaryScript::none(), &[0, 1], 1).unwrap();
    assert_eq!(mixed.actions, vec![0, 0]);
    assert!(mixed.fallback.iter().all(|&f| !f));
}

#[test]
fn omitted_report_uses_default_type() {
    let g = game_b();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mu = CorrelatedProfile::new((0..4).map(|_| random_dist(&mut rng, 4, 8)).collect());
    let cfg = ProtocolConfig::new(g.clone(), mu.clone(), 0).unwrap();
    let script = AdversaryScript::silent("withhold", vec![0], Some("report"));
    let runs = 4000u64;
    let mut counts = vec![0u64; 4];
    for seed in 0..runs {
        let rec = run_mediator_game(&cfg, &script, &[1, 1], seed).unwrap();
        assert_eq!(rec.effective_types, vec![0, 1]);
        let a: Vec<usize> = rec.recommendations.iter().map(|r| r.unwrap()).collect();
        counts[g.actions().index(&a)] += 1;
    }
    let target = g.types().index(&[0, 1]);
    let exact = cfg.sampler.frequencies(target, 4);
    let d = tv(&counts, runs, &exact);
    assert!(d <= 4.0 * (4.0 / runs as f64).sqrt(), "tv {d}");
}

#[test]
fn dropped_action_counts_as_zero() {
    let g = game_b();
    let cfg = ProtocolConfig::new(g.clone(), game_b_honest(&g), 0).unwrap();
    let script = AdversaryScript::silent("no-move", vec![1], Some("act"));
    let rec = run_mediator_game(&cfg, &script, &[1, 1], 0).unwrap();
    assert_eq!(rec.actions, vec![1, 0]);
    assert_eq!(rec.payoffs, vec![int(1), int(0)]);
}

#[test]
fn fallback_single_action() {
    let g = GameSpec::bayesian(&[2, 1, 1, 1], &[1, 2, 2, 2], |_| ratio(1, 2), |_, _| vec![int(0); 4]).unwrap();
    let mu = CorrelatedProfile::constant(&g, {
        let mut d = vec![Rational::zero(); 8];
        d[0] = Rational::one();
        d
    });
    let cfg = ProtocolConfig::new(g, mu, 1).unwrap();
    assert_eq!(best_response_fallback(&cfg, 0, 1, 1, &[]).action, 0);
}

#[test]
fn fallback_without_information_uses_prior() {
    let g = game_b();
    let cfg = ProtocolConfig::new(g.clone(), game_b_honest(&g), 0).unwrap();
    for t in 0..2 {
        // Direct expectation: a = 1 pays P(t_other = 1) when t = 1, and 0
        // when t = 0; a = 0 pays the complement.
        let eu = |a: usize| -> Rational {
            (0..2).map(|o| ratio(1, 2) * if a == t * o { int(1) } else { int(0) }).sum()
        };
        let expected = if eu(1) > eu(0) { 1 } else { 0 };
        let fb = best_response_fallback(&cfg, 0, t, t, &[]);
        assert_eq!(fb.action, expected);
        assert!(!fb.prior_only);
    }
}

/// `u_i = 1` iff `a_i` equals the other player's type; the recommendation
/// encodes that type masked by the recipient's own.
fn masked_game() -> (GameSpec, CorrelatedProfile) {
    let g = GameSpec::bayesian(&[2, 2], &[2, 2], |_| ratio(1, 4), |t, a| {
        vec![int((a[0] == t[1]) as i64), int((a[1] == t[0]) as i64)]
    })
    .unwrap();
    let mu = CorrelatedProfile::deterministic(&g, |t| vec![t[1] ^ t[0], t[0] ^ t[1]]);
    (g, mu)
}

#[test]
fn fallback_conditions_on_the_shared_type() {
    let (g, mu) = masked_game();
    let cfg = ProtocolConfig::new(g, mu, 0).unwrap();
    // True type 1, shared 0; one point with value v reveals a_0 = v = t_1 ⊕ 0.
    for v in 0..2u64 {
        let fb = best_response_fallback(&cfg, 0, 1, 0, &[(1, v)]);
        assert_eq!(fb.action as u64, v);
        let truthful = best_response_fallback(&cfg, 0, 1, 1, &[(1, v)]);
        assert_eq!(truthful.action as u64, 1 - v);
    }
}

#[test]
fn fallback_budget_falls_back_to_prior() {
    let (g, mu) = masked_game();
    let cfg = ProtocolConfig::new(g, mu, 0).unwrap().with_budget(1);
    let fb = best_response_fallback(&cfg, 0, 1, 0, &[(1, 1)]);
    assert!(fb.prior_only);
    assert!(fb.note.is_some());
}

fn point_mass(g: &GameSpec, a: &[usize]) -> CorrelatedProfile {
    let mut d = vec![Rational::zero(); g.actions().len()];
    d[g.actions().index(a)] = Rational::one();
    CorrelatedProfile::constant(g, d)
}

#[test]
fn scheduler_selects_element_of_s() {
    let g = coordination();
    let rule = MediatorRule::Select { options: vec![point_mass(&g, &[0, 0]), point_mass(&g, &[1, 1])] };
    let none = AdversaryScript::none();

    let fifo = run_async_mediator_game(&g, &rule, &[0, 0], &mut FifoPolicy::default(), &none, 1).unwrap();
    assert_eq!(fifo.selected, Some(1));
    assert_eq!(fifo.outcome.actions, vec![0, 0]);

    // The mediator is scheduled once before the first report arrives.
    let mut delayed = ScriptedPolicy::new(vec![ScriptStep::Schedule { process: 2 }]);
    let run = run_async_mediator_game(&g, &rule, &[0, 0], &mut delayed, &none, 1).unwrap();
    assert_eq!(run.selected, Some(2));
    assert_eq!(run.outcome.actions, vec![1, 1]);

    // Beyond the end of S the first element is used.
    let mut late = ScriptedPolicy::new(vec![ScriptStep::Schedule { process: 2 }; 3]);
    let run = run_async_mediator_game(&g, &rule, &[0, 0], &mut late, &none, 1).unwrap();
    assert_eq!(run.schedulings, 4);
    assert_eq!(run.selected, Some(1));
}

#[test]
fn punishment_fires_exactly_when_a_report_is_withheld() {
    let g = product_game(2);
    let mu = product_honest(&g);
    // Punishment: everybody plays action 1 regardless of type.
    let tau = StrategyProfile::pure(&g, |_, _| 1);
    let rule = MediatorRule::Collect { options: vec![mu], punishment: tau };
    for t in g.types().iter() {
        let honest = run_async_mediator_game(&g, &rule, &t, &mut FifoPolicy::default(), &AdversaryScript::none(), 5)
            .unwrap();
        assert!(honest.punished.iter().all(|&p| !p));
        assert_eq!(honest.outcome.actions, vec![t[0] * t[1]; 2]);
        for who in 0..2 {
            let script = AdversaryScript::silent("withhold", vec![who], Some("report"));
            let run = run_async_mediator_game(&g, &rule, &t, &mut FifoPolicy::default(), &script, 5).unwrap();
            assert_eq!(run.selected, None);
            assert!(run.punished.iter().all(|&p| p));
            assert_eq!(run.outcome.actions, vec![1, 1]);
        }
    }
}

#[test]
fn joint_sample_is_reproducible() {
    let a = joint_uniform_sample(4, 1, 7, &AdversaryScript::none(), 11).unwrap();
    let b = joint_uniform_sample(4, 1, 7, &AdversaryScript::none(), 11).unwrap();
    assert_eq!(a, b);
    assert!((1..=7).contains(&a));
    let f = joint_uniform_fraction(4, 1, &AdversaryScript::none(), 11).unwrap();
    assert_eq!(f, joint_uniform_fraction(4, 1, &AdversaryScript::none(), 11).unwrap());
    assert!(f >= Rational::zero() && f < Rational::one());
}

#[test]
fn joint_sample_single_player_is_its_own_draw() {
    // With one player the sum is its contribution; over seeds every value
    // of [1, N] appears.
    let mut seen = [false; 5];
    for seed in 0..200 {
        let r = joint_uniform_sample(1, 0, 5, &AdversaryScript::none(), seed).unwrap();
        seen[r as usize - 1] = true;
    }
    assert!(seen.iter().all(|&s| s));
}

#[test]
fn joint_sample_rejects_too_many_faults() {
    let script = AdversaryScript::silent("two", vec![0, 1], None);
    assert!(joint_uniform_sample(4, 1, 5, &script, 0).is_err());
}

#[test]
fn joint_sample_uniform_under_fixed_adversary() {
    let modulus = 6u64;
    let scripts = [
        AdversaryScript::new(
            "fixed",
            vec![2],
            vec![Rule { when: Trigger { tag: Some("rb.init".into()), index: Some(2), ..Default::default() }, action: Action::Set { value: 3 } }],
        ),
        AdversaryScript::silent("absent", vec![0], None),
    ];
    for script in scripts {
        let runs = 3000u64;
        let mut counts = vec![0u64; modulus as usize];
        for seed in 0..runs {
            counts[joint_uniform_sample(4, 1, modulus, &script, seed).unwrap() as usize - 1] += 1;
        }
        let expected = runs as f64 / modulus as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 5 degrees of freedom; 20.5 is the 0.999 quantile.
        assert!(chi2 < 20.5, "{}: chi2 {chi2} counts {counts:?}", script.name);
    }
}
