use mediatorless_mpc::battery::deviation_battery;
use mediatorless_mpc::{
    build_lookup, evaluate_circuit, gate_add, gate_multiply, open_to_all, vss_deal, Circuit, Mpc, MpcError, Regime,
};
use mediatorless_net::{AdversaryScript, SyncNet};
use mediatorless_sharing::{robust_reconstruct, share, Field};
use proptest::prelude::*;
use rand::SeedableRng;

fn mpc(q: u64, n: usize, k: usize, script: AdversaryScript, seed: u64) -> Mpc {
    Mpc::new(Field::new(q).unwrap(), k, SyncNet::new(n, script, seed).unwrap(), seed).unwrap()
}

/// Independent reconstruction from the honest players' shares.
fn reconstruct(f: &Field, shares: &[Vec<u64>], item: usize, k: usize) -> u64 {
    let pts: Vec<(u64, u64)> = shares.iter().enumerate().map(|(i, s)| (i as u64 + 1, s[item])).collect();
    robust_reconstruct(f, &pts, k).unwrap()
}

/// Plain Shamir sharing dealt outside the protocol, as `[player][item]`.
fn dealt(f: &Field, n: usize, k: usize, secrets: &[u64], seed: u64) -> Vec<Vec<u64>> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let sets: Vec<_> = secrets.iter().map(|&s| share(f, s, k, n, &mut rng).unwrap()).collect();
    (0..n).map(|i| sets.iter().map(|set| set.ys[i]).collect()).collect()
}

#[test]
fn addition_examples() {
    let f = Field::new(13).unwrap();
    let a = dealt(&f, 4, 1, &[3, 9, 6], 1);
    let b = dealt(&f, 4, 1, &[4, 0, 6], 2);
    let c = gate_add(&f, &a, &b).unwrap();
    assert_eq!((0..3).map(|g| reconstruct(&f, &c, g, 1)).collect::<Vec<_>>(), vec![7, 9, 12]);
    assert_eq!(gate_add(&f, &a, &b[..3].to_vec()), Err(MpcError::Mismatch));
}

#[test]
fn multiplication_examples() {
    let mut m = mpc(13, 5, 1, AdversaryScript::none(), 0);
    assert_eq!(m.regime(), Regime::Byzantine);
    let f = m.field;
    let a = dealt(&f, 5, 1, &[3, 7], 3);
    let b = dealt(&f, 5, 1, &[4, 1], 4);
    let c = gate_multiply(&mut m, "mul", &a, &b).unwrap();
    assert_eq!(reconstruct(&f, &c, 0, 1), 12);
    assert_eq!(reconstruct(&f, &c, 1, 1), 7);
}

/// Every input pair over F_13 against every single-player deviation: the
/// product is right or the gate aborts.
#[test]
fn multiplication_under_the_corruption_battery() {
    let f = Field::new(13).unwrap();
    let (n, k) = (5, 1);
    let pairs: Vec<(u64, u64)> = (0..13).flat_map(|x| (0..13).map(move |y| (x, y))).collect();
    let xs: Vec<u64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<u64> = pairs.iter().map(|p| p.1).collect();
    let mut corrected = 0;
    for c in 0..n {
        for (s, script) in deviation_battery(n, c).into_iter().enumerate() {
            let a = dealt(&f, n, k, &xs, s as u64);
            let b = dealt(&f, n, k, &ys, 100 + s as u64);
            let mut m = mpc(13, n, k, script.clone(), s as u64);
            let out = gate_multiply(&mut m, "mul", &a, &b).unwrap_or_else(|e| panic!("{}: {e}", script.name));
            corrected += m.events.len();
            for (g, &(x, y)) in pairs.iter().enumerate() {
                let honest: Vec<Vec<u64>> = (0..n).filter(|&i| i != c).map(|i| out[i].clone()).collect();
                let pts: Vec<(u64, u64)> =
                    (0..n).filter(|&i| i != c).zip(&honest).map(|(i, s)| (i as u64 + 1, s[g])).collect();
                let p = mediatorless_sharing::Poly::interpolate(&f, &pts);
                assert!(p.degree() <= k, "{}: honest shares off-degree", script.name);
                assert_eq!(p.constant(), f.mul(x, y), "{}: wrong product", script.name);
            }
        }
    }
    assert!(corrected > 0);
}

#[test]
fn four_players_correct_silence_and_never_output_wrong_products() {
    let f = Field::new(7).unwrap();
    let (n, k) = (4, 1);
    let xs: Vec<u64> = (0..7).collect();
    let ys: Vec<u64> = (0..7).rev().collect();
    let mut aborted = 0;
    for c in 0..n {
        for (s, script) in deviation_battery(n, c).into_iter().enumerate() {
            let a = dealt(&f, n, k, &xs, s as u64);
            let b = dealt(&f, n, k, &ys, 50 + s as u64);
            let mut m = mpc(7, n, k, script.clone(), s as u64);
            assert_eq!(m.regime(), Regime::CrashOmission);
            match gate_multiply(&mut m, "mul", &a, &b) {
                Ok(out) => {
                    for g in 0..xs.len() {
                        let pts: Vec<(u64, u64)> =
                            (0..n).filter(|&i| i != c).map(|i| (i as u64 + 1, out[i][g])).collect();
                        let p = mediatorless_sharing::Poly::interpolate(&f, &pts);
                        assert!(p.degree() <= k);
                        assert_eq!(p.constant(), f.mul(xs[g], ys[g]), "{}", script.name);
                    }
                }
                Err(MpcError::GateAbort(_)) => {
                    assert_ne!(script.name, "silent", "silence must be corrected");
                    aborted += 1;
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
    assert!(aborted > 0, "lies in the product are detected");
}

#[test]
fn multiply_by_shared_one() {
    let mut m = mpc(13, 5, 1, AdversaryScript::none(), 9);
    let f = m.field;
    let a = dealt(&f, 5, 1, &[11], 1);
    let one = dealt(&f, 5, 1, &[1], 2);
    let c = gate_multiply(&mut m, "mul", &a, &one).unwrap();
    assert_eq!(reconstruct(&f, &c, 0, 1), 11);
}

#[test]
fn circuit_x_plus_y_times_z() {
    let f = Field::new(17).unwrap();
    let mut c = Circuit::new(&f, 3);
    let (x, y, z) = (c.input(0), c.input(1), c.input(2));
    let yz = c.mul(y, z);
    let out = c.add(x, yz);
    c.output(out);
    let mut m = mpc(17, 5, 1, AdversaryScript::none(), 2);
    let inputs = vss_deal(&mut m, "in", &[(0, 2), (1, 3), (2, 4)]).shares;
    let shares = evaluate_circuit(&mut m, &c, &inputs).unwrap();
    let opened = open_to_all(&mut m, "out", &shares);
    assert!(opened.iter().all(|o| o == &vec![Some(14)]));
}

#[test]
fn empty_circuit_passes_inputs_through() {
    let f = Field::new(17).unwrap();
    let mut c = Circuit::new(&f, 2);
    c.output(c.input(1));
    c.output(c.input(0));
    let mut m = mpc(17, 4, 1, AdversaryScript::none(), 2);
    let inputs = dealt(&f, 4, 1, &[5, 6], 0);
    let out = evaluate_circuit(&mut m, &c, &inputs).unwrap();
    assert_eq!(out, inputs.iter().map(|s| vec![s[1], s[0]]).collect::<Vec<_>>());
    assert_eq!(m.net.round(), 0);
}

#[test]
fn indicator_and_power() {
    let f = Field::new(7).unwrap();
    let mut c = Circuit::new(&f, 1);
    let x = c.input(0);
    let i3 = c.indicator(x, 3);
    let p5 = c.pow(x, 5);
    c.output(i3);
    c.output(p5);
    for v in 0..7 {
        assert_eq!(c.eval_plain(&[v]), vec![(v == 3) as u64, f.pow(v, 5)]);
    }
}

/// Direct table lookup with the same conventions as the circuit.
fn reference(types: &[u64], sizes: &[usize], rs: &[u64], modulus: u64, table: &dyn Fn(usize, u64) -> Vec<usize>) -> Vec<usize> {
    let mut t = 0;
    for (&v, &s) in types.iter().zip(sizes) {
        let v = if (v as usize) < s { v as usize } else { 0 };
        t = t * s + v;
    }
    let sum: u64 = rs.iter().map(|&r| if (1..=modulus).contains(&r) { r % modulus } else { 0 }).sum();
    let r = match sum % modulus {
        0 => modulus,
        x => x,
    };
    table(t, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn lookup_matches_the_table(
        sizes in prop::collection::vec(1usize..=3, 2..=3),
        modulus in 1u64..=4,
        salt in 0u64..1000,
        types in prop::collection::vec(0u64..7, 3),
        rs in prop::collection::vec(0u64..7, 3),
    ) {
        let f = Field::new(7).unwrap();
        let n = sizes.len();
        let table = move |t: usize, r: u64| -> Vec<usize> {
            (0..n).map(|j| ((t as u64 * 31 + r * 7 + j as u64 * 3 + salt) % 5) as usize).collect()
        };
        let (c, layout) = build_lookup(&f, &sizes, modulus, table);
        let mut inputs = vec![0; 2 * n];
        for i in 0..n {
            inputs[layout.type_input(i)] = types[i];
            inputs[layout.r_input(i)] = rs[i];
        }
        let got: Vec<usize> = c.eval_plain(&inputs).into_iter().map(|v| v as usize).collect();
        prop_assert_eq!(got, reference(&types[..n], &sizes, &rs[..n], modulus, &table));
    }
}

#[test]
fn shared_lookup_matches_the_table() {
    let f = Field::new(7).unwrap();
    let sizes = [2, 2, 2, 2];
    let modulus = 3;
    let table = |t: usize, r: u64| -> Vec<usize> { (0..4).map(|j| ((t + r as usize + j) % 3) % 2).collect() };
    let (c, layout) = build_lookup(&f, &sizes, modulus, table);
    for seed in 0..6u64 {
        let types: Vec<u64> = (0..4).map(|i| (seed >> i) & 1).collect();
        let rs: Vec<u64> = (0..4).map(|i| 1 + (seed + i) % 3).collect();
        let mut m = mpc(7, 4, 1, AdversaryScript::none(), seed);
        let secrets: Vec<(usize, u64)> = (0..4).map(|i| (i, types[i])).chain((0..4).map(|i| (i, rs[i]))).collect();
        let dealt = vss_deal(&mut m, "in", &secrets).shares;
        let inputs: Vec<Vec<u64>> = dealt
            .iter()
            .map(|s| {
                let mut v = vec![0; 8];
                for i in 0..4 {
                    v[layout.type_input(i)] = s[i];
                    v[layout.r_input(i)] = s[4 + i];
                }
                v
            })
            .collect();
        let out = evaluate_circuit(&mut m, &c, &inputs).unwrap();
        let opened = open_to_all(&mut m, "out", &out);
        let want: Vec<Option<u64>> =
            reference(&types, &sizes, &rs, modulus, &table).into_iter().map(|a| Some(a as u64)).collect();
        assert!(opened.iter().all(|o| *o == want), "seed {seed}");
    }
}
