use std::collections::BTreeMap;

use mediatorless_mpc::battery::deviation_battery;
use mediatorless_mpc::{vss_deal, vss_share, Mpc, SymBivariate};
use mediatorless_net::{Action, AdversaryScript, Rule, SyncNet, Trigger};
use mediatorless_sharing::{Field, Poly};

fn mpc(q: u64, n: usize, k: usize, script: AdversaryScript, seed: u64) -> Mpc {
    let net = SyncNet::new(n, script, seed).unwrap().recording();
    Mpc::new(Field::new(q).unwrap(), k, net, seed).unwrap()
}

/// Honest shares interpolate to one polynomial of degree ≤ k; returns its
/// constant term.
fn honest_secret(f: &Field, shares: &[Vec<u64>], item: usize, corrupt: &[usize], k: usize) -> u64 {
    let pts: Vec<(u64, u64)> = (0..shares.len())
        .filter(|i| !corrupt.contains(i))
        .map(|i| (i as u64 + 1, shares[i][item]))
        .collect();
    let p = Poly::interpolate(f, &pts);
    assert!(p.degree() <= k, "honest shares not on a degree-{k} polynomial: {pts:?}");
    p.constant()
}

#[test]
fn honest_dealer_shares_its_value() {
    let mut m = mpc(13, 4, 1, AdversaryScript::none(), 0);
    let out = vss_deal(&mut m, "in", &[(0, 4)]);
    assert!(!out.disqualified[0]);
    assert_eq!(honest_secret(&m.field, &out.shares, 0, &[], 1), 4);
    assert_eq!(m.net.round(), 4, "honest runs take the four-round path");
}

#[test]
fn silent_dealer_yields_default_zero() {
    let mut m = mpc(13, 4, 1, AdversaryScript::silent("mute", vec![2], None), 1);
    let out = vss_deal(&mut m, "in", &[(2, 9), (0, 5)]);
    assert!(out.disqualified[0]);
    assert!(!out.disqualified[1]);
    assert!(out.shares.iter().all(|s| s[0] == 0));
    assert_eq!(honest_secret(&m.field, &out.shares, 1, &[2], 1), 5);
}

#[test]
fn inconsistent_rows_to_two_players_never_split_honest_shares() {
    for (da, db) in [(1, 2), (1, 0), (0, 3), (5, 5)] {
        let script = AdversaryScript::new(
            "two-faced",
            vec![0],
            vec![
                Rule { when: Trigger { tag: Some("in.row".into()), from: Some(0), to: Some(1), index: Some(0), ..Default::default() }, action: Action::Offset { value: da } },
                Rule { when: Trigger { tag: Some("in.row".into()), from: Some(0), to: Some(2), index: Some(1), ..Default::default() }, action: Action::Offset { value: db } },
            ],
        );
        let mut m = mpc(13, 4, 1, script, 3);
        let out = vss_deal(&mut m, "in", &[(0, 7)]);
        honest_secret(&m.field, &out.shares, 0, &[0], 1);
    }
}

#[test]
fn battery_keeps_honest_shares_consistent() {
    let (mut disqualified, mut accused, mut max_rounds) = (0, 0, 0);
    for (n, k) in [(4, 1), (5, 1)] {
        for c in 0..n {
            for script in deviation_battery(n, c) {
                for seed in 0..3 {
                    let mut m = mpc(13, n, k, script.clone(), seed);
                    let secrets: Vec<(usize, u64)> = (0..n).map(|d| (d, (d as u64 * 3 + seed) % 13)).collect();
                    let out = vss_deal(&mut m, "in", &secrets);
                    disqualified += out.disqualified.iter().filter(|&&d| d).count();
                    accused += out.accused.iter().filter(|a| !a.is_empty()).count();
                    max_rounds = max_rounds.max(m.net.round());
                    assert!(m.net.round() <= 2 * k as u32 + 5, "{}: {} rounds", script.name, m.net.round());
                    for (item, &(d, s)) in secrets.iter().enumerate() {
                        let got = honest_secret(&m.field, &out.shares, item, &[c], k);
                        if d != c {
                            assert!(!out.disqualified[item], "{}: honest dealer {d} disqualified", script.name);
                            assert_eq!(got, s, "{}: honest dealer {d}", script.name);
                        } else if out.disqualified[item] {
                            assert_eq!(got, 0);
                        }
                    }
                }
            }
        }
    }
    // The battery reaches the disqualification and public-row paths.
    assert!(disqualified > 0 && accused > 0, "{disqualified} {accused}");
    assert!(max_rounds > 4);
}

/// Distribution of everything player `c` sees, over all dealer randomness.
fn view_distribution(secret: u64, c: usize, script: &AdversaryScript) -> BTreeMap<String, usize> {
    let f = Field::new(5).unwrap();
    let mut dist = BTreeMap::new();
    for a in 0..5 {
        for b in 0..5 {
            let mut m = mpc(5, 4, 1, script.clone(), 0);
            let poly = SymBivariate::from_upper(&f, 1, secret, &[a, b]);
            vss_share(&mut m, "in", &[(0, poly)]);
            let view: Vec<_> = m
                .net
                .transcript()
                .iter()
                .filter(|r| r.to.is_none() || r.to == Some(c) || r.from == c)
                .map(|r| (r.round, r.tag.clone(), r.from, r.to, r.sent.clone()))
                .collect();
            *dist.entry(format!("{view:?}")).or_default() += 1;
        }
    }
    dist
}

#[test]
fn coalition_view_is_independent_of_the_secret() {
    for c in 1..4 {
        let complainer = AdversaryScript::new(
            "complain",
            vec![c],
            vec![Rule { when: Trigger { tag: Some("in.cross".into()), from: Some(c), ..Default::default() }, action: Action::Offset { value: 1 } }],
        );
        for script in [AdversaryScript::none(), complainer] {
            let base = view_distribution(0, c, &script);
            for s in 1..5 {
                assert_eq!(view_distribution(s, c, &script), base, "player {c}, secret {s}");
            }
        }
    }
}
