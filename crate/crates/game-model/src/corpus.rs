//! Small games used throughout the tests and demos.

use num::{One, Zero};

use crate::rational::{int, Rational};
use crate::{CorrelatedProfile, GameSpec};

/// `n` players choose 0 or 1. If at least `n−1` play 0 everyone gets 0;
/// otherwise players choosing 1 get 1 and the rest get −1.
pub fn game_a(n: usize) -> GameSpec {
    GameSpec::normal_form(&vec![2; n], |a| {
        let zeros = a.iter().filter(|&&x| x == 0).count();
        if zeros + 1 >= n {
            vec![Rational::zero(); n]
        } else {
            a.iter().map(|&x| if x == 1 { int(1) } else { int(-1) }).collect()
        }
    })
    .expect("game A is well formed")
}

/// Two players with uniform binary types; `u_i = 1` iff `a_i = t_1·t_2`.
pub fn game_b() -> GameSpec {
    product_game(2)
}

/// Both players are told `t_1·t_2`.
pub fn game_b_honest(g: &GameSpec) -> CorrelatedProfile {
    product_honest(g)
}

/// `n` players with uniform binary types; `u_i = 1` iff `a_i = Π t_j`.
pub fn product_game(n: usize) -> GameSpec {
    let p = Rational::new(1.into(), (1u64 << n).into());
    GameSpec::bayesian(&vec![2; n], &vec![2; n], |_| p.clone(), |t, a| {
        let prod = t.iter().product::<usize>();
        a.iter().map(|&x| if x == prod { Rational::one() } else { Rational::zero() }).collect()
    })
    .expect("product game is well formed")
}

pub fn product_honest(g: &GameSpec) -> CorrelatedProfile {
    let n = g.players();
    CorrelatedProfile::deterministic(g, |t| vec![t.iter().product::<usize>(); n])
}

/// Cooperate = 0, defect = 1.
pub fn prisoners_dilemma() -> GameSpec {
    GameSpec::normal_form(&[2, 2], |a| match (a[0], a[1]) {
        (0, 0) => vec![int(3), int(3)],
        (0, 1) => vec![int(0), int(4)],
        (1, 0) => vec![int(4), int(0)],
        _ => vec![int(1), int(1)],
    })
    .expect("well formed")
}

/// Two-action common-interest game: matching actions pay 1 to both.
pub fn coordination() -> GameSpec {
    GameSpec::normal_form(&[2, 2], |a| {
        let v = if a[0] == a[1] { int(1) } else { int(0) };
        vec![v.clone(), v]
    })
    .expect("well formed")
}

/// Every outcome pays `value` to everyone.
pub fn constant(type_sizes: &[usize], action_sizes: &[usize], value: i64) -> GameSpec {
    let total: usize = type_sizes.iter().product();
    let p = Rational::new(1.into(), total.into());
    let n = action_sizes.len();
    GameSpec::bayesian(type_sizes, action_sizes, |_| p.clone(), |_, _| vec![int(value); n])
        .expect("well formed")
}
