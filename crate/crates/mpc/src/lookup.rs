//! Circuit form of a sampler table: from shared types `t_i` and shared
//! contributions `r_i ∈ [1, N]`, compute each player's recommended action
//! for the profile `table(t, r)` with `r = Σ r_i mod N` mapped into
//! `[1, N]`.
//!
//! A type share outside `[0, |T_i|)` selects type 0, the default type. A
//! contribution outside `[1, N]` counts as 0.

use mediatorless_sharing::Field;

use crate::{Circuit, Wire};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LookupLayout {
    pub players: usize,
    pub modulus: u64,
}

impl LookupLayout {
    pub fn type_input(&self, i: usize) -> usize {
        i
    }

    pub fn r_input(&self, i: usize) -> usize {
        self.players + i
    }
}

/// Indicators of `x = v` for `v ∈ [0, size)`, with index 0 also covering
/// every value outside the range.
fn one_hot(c: &mut Circuit, x: Wire, size: usize) -> Vec<Wire> {
    let mut hot: Vec<Wire> = (1..size).map(|v| c.indicator(x, v as u64)).collect();
    let one = c.constant(1);
    let rest = c.sum(&hot);
    let zero_case = c.sub(one, rest);
    hot.insert(0, zero_case);
    hot
}

/// `action_of(type_profile_index, r)` returns the action index of every
/// player; type profiles are indexed with the first player most
/// significant.
pub fn build_lookup(
    field: &Field,
    type_sizes: &[usize],
    modulus: u64,
    action_of: impl Fn(usize, u64) -> Vec<usize>,
) -> (Circuit, LookupLayout) {
    let n = type_sizes.len();
    let layout = LookupLayout { players: n, modulus };
    let mut c = Circuit::new(field, 2 * n);
    let big_n = modulus as usize;

    // Type-profile indicators by prefix products.
    let mut profiles = vec![c.constant(1)];
    for (i, &size) in type_sizes.iter().enumerate() {
        let x = c.input(layout.type_input(i));
        let hot = one_hot(&mut c, x, size);
        let mut next = Vec::with_capacity(profiles.len() * size);
        for &p in &profiles {
            for &h in &hot {
                next.push(c.mul(p, h));
            }
        }
        profiles = next;
    }

    // Residue indicators of the sum of contributions, by cyclic convolution.
    let mut residues = vec![c.constant(1)];
    residues.extend((1..big_n).map(|_| c.constant(0)));
    if big_n > 1 {
        for i in 0..n {
            let x = c.input(layout.r_input(i));
            let hot = one_hot(&mut c, x, big_n);
            let mut next = vec![Vec::new(); big_n];
            for (a, &x) in residues.iter().enumerate() {
                for (b, &y) in hot.iter().enumerate() {
                    let p = c.mul(x, y);
                    next[(a + b) % big_n].push(p);
                }
            }
            residues = next.iter().map(|terms| c.sum(terms)).collect();
        }
    }
    let r_of = |res: usize| if res == 0 { modulus } else { res as u64 };

    let table: Vec<Vec<Vec<usize>>> =
        (0..profiles.len()).map(|t| (0..big_n).map(|res| action_of(t, r_of(res))).collect()).collect();
    // Either multiply every (profile, residue) pair and combine, or combine
    // residues per profile first; pick the one with fewer products.
    let joint_cost = profiles.len() * big_n;
    let split_cost = profiles.len() * n;
    let outputs: Vec<Wire> = if big_n == 1 || profiles.len() == 1 || joint_cost <= split_cost {
        let mut acc: Vec<Vec<(u64, Wire)>> = vec![Vec::new(); n];
        for (t, &p) in profiles.iter().enumerate() {
            for (res, &r) in residues.iter().enumerate() {
                let j = c.mul(p, r);
                for (player, terms) in acc.iter_mut().enumerate() {
                    terms.push((table[t][res][player] as u64, j));
                }
            }
        }
        acc.iter().map(|terms| c.linear(terms)).collect()
    } else {
        let mut acc: Vec<Vec<Wire>> = vec![Vec::new(); n];
        for (t, &p) in profiles.iter().enumerate() {
            for (player, out) in acc.iter_mut().enumerate() {
                let terms: Vec<(u64, Wire)> =
                    residues.iter().enumerate().map(|(res, &r)| (table[t][res][player] as u64, r)).collect();
                let y = c.linear(&terms);
                out.push(c.mul(p, y));
            }
        }
        acc.iter().map(|ws| c.sum(ws)).collect()
    };
    for w in outputs {
        c.output(w);
    }
    (c, layout)
}
