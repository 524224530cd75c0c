use std::cmp::Ordering;

use mediatorless_beliefs::*;
use mediatorless_game::rational::ratio;
use mediatorless_game::CoalitionMask;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seq(v: &[u32]) -> LieSequence {
    LieSequence(v.to_vec())
}

fn flip(h: &mut GlobalHistory, round: usize, from: usize, to: usize) {
    let m = h.rounds[round - 1].iter_mut().find(|m| m.from == from && m.to == to).expect("edge exists");
    m.value ^= 1;
}

/// Flips one message and makes every later message honest again given the
/// replayed states, so the result has exactly that one lie.
fn with_lie(p: &dyn Protocol, coins: &[u64], round: usize, from: usize, to: usize) -> GlobalHistory {
    let mut h = honest_history(p, coins);
    flip(&mut h, round, from, to);
    for r in round..p.rounds() {
        let l = label_lies(p, &h).unwrap();
        for (m, &lie) in h.rounds[r].iter_mut().zip(&l.lies[r]) {
            if lie {
                m.value ^= 1;
            }
        }
    }
    h
}

fn kbar_internal_lie(labeled: &LabeledHistory, coalition: &[usize]) -> bool {
    labeled.history.rounds.iter().zip(&labeled.lies).any(|(msgs, lies)| {
        msgs.iter().zip(lies).any(|(m, &l)| l && !coalition.contains(&m.from) && !coalition.contains(&m.to))
    })
}

#[test]
fn weight_examples() {
    assert_eq!(weight_exponent(&seq(&[1]), 2), ratio(1, 4));
    assert_eq!(weight_exponent(&seq(&[0, 2]), 2), ratio(1, 8));
    assert_eq!(weight_exponent(&seq(&[]), 3), ratio(0, 1));
}

#[test]
fn lex_examples() {
    assert_eq!(lex_compare(&seq(&[1]), &seq(&[0, 2])), Ordering::Greater);
    assert_eq!(lex_compare(&seq(&[0, 1]), &seq(&[0, 1, 0])), Ordering::Equal);
    assert_eq!(lex_compare(&seq(&[0, 1]), &seq(&[0, 1, 1])), Ordering::Less);
    assert_eq!(lex_compare(&seq(&[2, 0, 0]), &seq(&[1, 9, 9])), Ordering::Greater);
}

fn bounded_pair(n: usize) -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    let one = proptest::collection::vec(0..=n as u32, 0..=4);
    (one.clone(), one)
}

proptest! {
    #[test]
    fn lex_order_matches_weight_for_counts_up_to_n((a, b) in (2usize..=4).prop_flat_map(bounded_pair), n in Just(4usize)) {
        // Counts drawn at most 4 are within the bound for n = 4.
        let (la, lb) = (seq(&a), seq(&b));
        prop_assert_eq!(lex_compare(&la, &lb), weight_exponent(&la, n).cmp(&weight_exponent(&lb, n)));
    }

    #[test]
    fn dominance_bound_is_attained_or_beaten(n in 2usize..=4, len in 1usize..=4, r_star in 1usize..=4) {
        prop_assume!(r_star <= len);
        // The adversarial pair: one extra lie at r*, then n lies per later
        // round on the other side.
        let mut hi = vec![0u32; len];
        hi[r_star - 1] = 1;
        let mut lo = vec![0u32; len];
        for c in lo.iter_mut().skip(r_star) {
            *c = n as u32;
        }
        let gap = weight_exponent(&seq(&hi), n) - weight_exponent(&seq(&lo), n);
        prop_assert_eq!(gap.clone(), dominance_bound(r_star, len, n));
        prop_assert!(gap > ratio(0, 1));
    }

    #[test]
    fn lie_probability_decreases_in_m(n in 2usize..=4, round in 1usize..=3, e in 1i32..12) {
        let (a, b) = (2f64.powi(e), 2f64.powi(e + 1));
        prop_assert!(lie_probability(b, n, round) < lie_probability(a, n, round));
        prop_assert!(lie_probability(a, n, round) < lie_probability(a, n, round + 1));
    }
}

#[test]
fn honest_history_has_no_lies() {
    let p = Toy3 { n: 4 };
    for c in 0..16u64 {
        let coins: Vec<u64> = (0..4).map(|i| (c >> i) & 1).collect();
        let l = label_lies(&p, &honest_history(&p, &coins)).unwrap();
        assert_eq!(lie_sequence(&l), seq(&[0, 0, 0]));
    }
}

#[test]
fn a_lie_is_charged_once_and_downstream_messages_stay_honest() {
    let p = Toy3 { n: 4 };
    let h = with_lie(&p, &[0, 1, 1, 0], 1, 3, 0);
    let l = label_lies(&p, &h).unwrap();
    // Player 0 now forwards a wrong parity and complains; both follow from
    // its replayed state, so only the flipped coin counts.
    assert_eq!(lie_sequence(&l), seq(&[1, 0, 0]));
    assert!(l.lies[0].iter().zip(&h.rounds[0]).all(|(&lie, m)| lie == (m.from == 3 && m.to == 0)));
    let mut h2 = h.clone();
    flip(&mut h2, 3, 2, 1);
    assert_eq!(lie_sequence(&label_lies(&p, &h2).unwrap()), seq(&[1, 0, 1]));
}

#[test]
fn malformed_histories_are_rejected() {
    let p = Toy2 { n: 3 };
    let mut h = honest_history(&p, &[0, 0, 1]);
    h.rounds[1][0].value = 7;
    assert!(matches!(label_lies(&p, &h), Err(BeliefError::Malformed(_))));
    let mut h = honest_history(&p, &[0, 0, 1]);
    h.rounds[0].swap(0, 1);
    assert!(matches!(label_lies(&p, &h), Err(BeliefError::Malformed(_))));
}

#[test]
fn truthful_variant_on_random_histories() {
    let p = Toy3 { n: 4 };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut rewritten = 0;
    for i in 0..1000 {
        let h = sample_history(&p, &mut rng, 0.15);
        let members = vec![i % 4];
        let k = CoalitionMask::new(members.clone(), 1, 4).unwrap();
        let labeled = label_lies(&p, &h).unwrap();
        match truthful_variant(&p, &h, &k) {
            Ok(v) => {
                rewritten += 1;
                assert!(kbar_internal_lie(&labeled, &members));
                for &j in &members {
                    assert_eq!(h.local(&p, j), v.local(&p, j));
                }
                let lv = label_lies(&p, &v).unwrap();
                assert_eq!(lex_compare(&lie_sequence(&lv), &lie_sequence(&labeled)), Ordering::Less);
            }
            Err(BeliefError::Usage(_)) => assert!(!kbar_internal_lie(&labeled, &members)),
            Err(e) => panic!("{e}"),
        }
    }
    assert!(rewritten > 300, "only {rewritten} histories exercised the rewrite");
}

#[test]
fn truthful_variant_requires_an_outsider_lie() {
    let p = Toy3 { n: 4 };
    let mut h = honest_history(&p, &[1, 0, 0, 1]);
    flip(&mut h, 2, 3, 0);
    let k = CoalitionMask::new(vec![0], 1, 4).unwrap();
    assert!(matches!(truthful_variant(&p, &h, &k), Err(BeliefError::Usage(_))));
}

fn random_view(p: &dyn Protocol, coalition: &[usize], rng: &mut ChaCha8Rng) -> CoalitionView {
    let h = sample_history(p, rng, 0.3);
    CoalitionView::of(p, &h, coalition)
}

#[test]
fn round_search_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cases: Vec<(Box<dyn Protocol>, Vec<usize>)> = vec![
        (Box::new(Toy3 { n: 4 }), vec![0]),
        (Box::new(Toy3 { n: 4 }), vec![1, 3]),
        (Box::new(Toy2 { n: 3 }), vec![2]),
        (Box::new(Toy3 { n: 3 }), vec![1]),
    ];
    for (p, k) in &cases {
        for _ in 0..6 {
            let view = random_view(p.as_ref(), k, &mut rng);
            let fast = view_minimum(p.as_ref(), &view).unwrap();
            let slow = minimizers(p.as_ref(), &view).unwrap();
            assert_eq!(fast.min_weight, slow.min_weight);
            let untruthful = slow
                .histories
                .iter()
                .filter(|h| kbar_internal_lie(&label_lies(p.as_ref(), h).unwrap(), k))
                .count() as u64;
            assert_eq!(fast.untruthful_minimizers, untruthful);
            assert_eq!(fast.truthful_minimizers, slow.histories.len() as u64 - untruthful);
            for h in &slow.histories {
                assert_eq!(CoalitionView::of(p.as_ref(), h, k), view);
            }
        }
    }
}

#[test]
fn honest_views_pass() {
    let p = Toy3 { n: 4 };
    for c in 0..16u64 {
        let coins: Vec<u64> = (0..4).map(|i| (c >> i) & 1).collect();
        let view = CoalitionView::of(&p, &honest_history(&p, &coins), &[0]);
        let min = view_minimum(&p, &view).unwrap();
        assert_eq!(min.min_weight, ratio(0, 1));
        assert!(min.passes());
        // Player 0 saw every coin, so the honest completion is unique.
        assert_eq!(min.truthful_minimizers, 1);
    }
}

#[test]
fn a_direct_lie_is_blamed_on_its_sender() {
    let p = Toy3 { n: 4 };
    let h = with_lie(&p, &[0, 1, 0, 1], 2, 3, 0);
    let view = CoalitionView::of(&p, &h, &[0]);
    let set = minimizers(&p, &view).unwrap();
    assert!(view_minimum(&p, &view).unwrap().passes());
    assert_eq!(set.min_weight, ratio(1, 64));
    for g in &set.histories {
        let l = label_lies(&p, g).unwrap();
        let lies: Vec<_> = g.rounds.iter().flatten().zip(l.lies.iter().flatten()).filter(|(_, &x)| x).map(|(m, _)| *m).collect();
        assert_eq!(lies.len(), 1);
        assert_eq!((lies[0].from, lies[0].to), (3, 0));
    }
}

#[test]
fn two_complaints_are_blamed_on_the_last_round() {
    let p = Toy3 { n: 4 };
    let mut h = honest_history(&p, &[1, 1, 0, 0]);
    flip(&mut h, 3, 1, 0);
    flip(&mut h, 3, 2, 0);
    let view = CoalitionView::of(&p, &h, &[0]);
    let set = minimizers(&p, &view).unwrap();
    assert!(view_minimum(&p, &view).unwrap().passes());
    assert_eq!(set.min_weight, ratio(2, 512));
    for g in &set.histories {
        let l = label_lies(&p, g).unwrap();
        assert_eq!(lie_sequence(&l), seq(&[0, 0, 2]));
        assert!(g.rounds[2].iter().zip(&l.lies[2]).all(|(m, &x)| !x || m.to == 0));
    }
}

#[test]
fn toy3_is_paranoid_for_single_players() {
    let p = Toy3 { n: 4 };
    let report = verify_k_paranoid(&p, 1, &ParanoidOptions { ratio_pairs: 20, ..Default::default() }).unwrap();
    assert_eq!(report.schema, PARANOID_SCHEMA);
    assert_eq!(report.views, 4 * 32768);
    assert!(report.passed, "{} failing views, e.g. {:?}", report.failing, report.verdicts.first());
    assert_eq!(report.ratio.unwrap().pairs, 20);
}

#[test]
fn toy2_is_paranoid_for_single_players() {
    let p = Toy2 { n: 4 };
    let report = verify_k_paranoid(&p, 1, &ParanoidOptions { ratio_pairs: 0, ..Default::default() }).unwrap();
    assert!(report.passed, "{} failing views", report.failing);
}

#[test]
fn budget_is_enforced() {
    let p = Toy3 { n: 4 };
    let err = verify_k_paranoid(&p, 1, &ParanoidOptions { max_views: 1000, ..Default::default() }).unwrap_err();
    assert!(matches!(err, BeliefError::Budget { needed: 131072, budget: 1000 }));
}

#[test]
fn detailed_reports_round_trip() {
    let p = Toy2 { n: 3 };
    let report = verify_k_paranoid(&p, 1, &ParanoidOptions { detailed: true, ratio_pairs: 5, ..Default::default() }).unwrap();
    assert_eq!(report.verdicts.len() as u64, report.views);
    let back: ParanoidReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn ratio_vanishes_for_variant_pairs() {
    let p = Toy3 { n: 4 };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let k = CoalitionMask::new(vec![2], 1, 4).unwrap();
    let mut pairs = Vec::new();
    while pairs.len() < 50 {
        let h = sample_history(&p, &mut rng, 0.2);
        if let Ok(v) = truthful_variant(&p, &h, &k) {
            pairs.push((h, v));
        }
    }
    // Far enough out the weight gap dominates every polylog factor; the
    // smallest gap here is 1/512, so ln m must reach the thousands.
    for (h, v) in &pairs {
        let (a, b) = (label_lies(&p, h).unwrap(), label_lies(&p, v).unwrap());
        let log_ratio = |ln_m: f64| {
            tremble_log_probability(&p, &a, ln_m).unwrap().log_pattern
                - tremble_log_probability(&p, &b, ln_m).unwrap().log_pattern
        };
        let ladder: Vec<f64> = (10..=16).map(|e| log_ratio(2f64.powi(e))).collect();
        assert!(ladder.windows(2).all(|w| w[1] < w[0]), "{ladder:?}");
        assert!(ladder[ladder.len() - 1] < 1e-3f64.ln());
    }
}

fn receipts_of(p: &dyn Protocol, h: &GlobalHistory, k: &[usize]) -> Vec<Vec<Receipt>> {
    CoalitionView::of(p, h, k).rounds.into_iter().map(|r| r.into_iter().map(Receipt::Delivered).collect()).collect()
}

fn incident_slot(p: &dyn Protocol, k: &[usize], round: usize, from: usize, to: usize) -> usize {
    p.edges(round)
        .into_iter()
        .filter(|(f, t)| k.contains(f) || k.contains(t))
        .position(|e| e == (from, to))
        .unwrap()
}

#[test]
fn async_examples_mirror_the_synchronous_ones() {
    let p = Toy2 { n: 4 };
    let k = [0usize];
    let h = honest_history(&p, &[1, 0, 1, 1]);
    let honest = receipts_of(&p, &h, &k);
    let min = async_view_minimum(&p, &k, &[1], &honest).unwrap();
    assert!(min.passes());
    assert_eq!(min.min_weight, ratio(0, 1));

    let mut flipped = h.clone();
    flip(&mut flipped, 2, 3, 0);
    let min = async_view_minimum(&p, &k, &[1], &receipts_of(&p, &flipped, &k)).unwrap();
    assert!(min.passes());
    assert_eq!(min.min_weight, ratio(1, 64));

    // A round-2 message that was still in flight costs nothing.
    let mut pending = honest.clone();
    pending[1][incident_slot(&p, &k, 2, 3, 0)] = Receipt::Pending;
    let min = async_view_minimum(&p, &k, &[1], &pending).unwrap();
    assert!(min.passes());
    assert_eq!(min.min_weight, ratio(0, 1));

    // Two early round-2 messages are two forced lies, and nothing else.
    let mut early = honest.clone();
    for from in [1, 2] {
        let slot = incident_slot(&p, &k, 2, from, 0);
        let Receipt::Delivered(v) = early[1][slot] else { unreachable!() };
        early[1][slot] = Receipt::Early(v);
    }
    let min = async_view_minimum(&p, &k, &[1], &early).unwrap();
    assert!(min.passes());
    assert_eq!(min.min_weight, ratio(2, 64));

    let mut bad = honest.clone();
    bad[0][0] = Receipt::Early(0);
    assert!(matches!(async_view_minimum(&p, &k, &[1], &bad), Err(BeliefError::Usage(_))));
}

#[test]
fn async_check_passes_on_toy2() {
    let report = async_belief_check(&Toy2 { n: 4 }, 1, &ParanoidOptions::default()).unwrap();
    assert!(report.passed, "{} failing views", report.failing);
    assert!(report.views > 0);
}
