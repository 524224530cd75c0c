//! Two toy protocols over bits.
//!
//! Both start with every player sending its coin to every other player;
//! each player then holds a parity estimate, its coin XOR the coins it
//! received.

use crate::Protocol;

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn xor(received: &[(usize, u64)]) -> u64 {
    received.iter().fold(0, |acc, &(_, v)| acc ^ (v & 1))
}

/// Three rounds: coins to everyone; parity estimate around a ring
/// (`i → i + 1`); then everyone tells everyone whether the estimate it got
/// from its ring predecessor disagreed with its own. The final state is 1
/// if any complaint was seen.
#[derive(Clone, Debug)]
pub struct Toy3 {
    pub n: usize,
}

impl Protocol for Toy3 {
    fn name(&self) -> &str {
        "toy3"
    }

    fn players(&self) -> usize {
        self.n
    }

    fn rounds(&self) -> usize {
        3
    }

    fn coins(&self) -> u64 {
        2
    }

    fn alphabet(&self) -> u64 {
        2
    }

    fn edges(&self, round: usize) -> Vec<(usize, usize)> {
        match round {
            2 => (0..self.n).map(|i| (i, (i + 1) % self.n)).collect(),
            _ => all_pairs(self.n),
        }
    }

    fn init(&self, _player: usize, coin: u64) -> u64 {
        coin
    }

    fn message(&self, _player: usize, state: u64, _round: usize, _to: usize) -> u64 {
        state
    }

    fn update(&self, _player: usize, state: u64, round: usize, received: &[(usize, u64)]) -> u64 {
        match round {
            1 | 2 => state ^ xor(received),
            _ => state | received.iter().fold(0, |acc, &(_, v)| acc | (v & 1)),
        }
    }
}

/// Two rounds: coins to everyone, then parity estimates to everyone. The
/// final state counts the estimates that disagreed with the player's own,
/// capped at 1.
#[derive(Clone, Debug)]
pub struct Toy2 {
    pub n: usize,
}

impl Protocol for Toy2 {
    fn name(&self) -> &str {
        "toy2"
    }

    fn players(&self) -> usize {
        self.n
    }

    fn rounds(&self) -> usize {
        2
    }

    fn coins(&self) -> u64 {
        2
    }

    fn alphabet(&self) -> u64 {
        2
    }

    fn edges(&self, _round: usize) -> Vec<(usize, usize)> {
        all_pairs(self.n)
    }

    fn init(&self, _player: usize, coin: u64) -> u64 {
        coin
    }

    fn message(&self, _player: usize, state: u64, _round: usize, _to: usize) -> u64 {
        state
    }

    fn update(&self, _player: usize, state: u64, round: usize, received: &[(usize, u64)]) -> u64 {
        match round {
            1 => state ^ xor(received),
            _ => received.iter().any(|&(_, v)| v != state) as u64,
        }
    }
}
