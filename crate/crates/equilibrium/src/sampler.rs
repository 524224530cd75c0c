use mediatorless_game::{CorrelatedProfile, Rational};
use num::{BigInt, Integer, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::EqError;

/// `μ*(t, r)` for `r ∈ [1..N]`: for each type profile, consecutive blocks of
/// `r` values map to action profiles in increasing index order, with block
/// sizes `N·μ(t)(a)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SamplerTable {
    pub modulus: u64,
    /// `table[t][r − 1]` is an action-profile index.
    pub table: Vec<Vec<usize>>,
}

impl SamplerTable {
    pub fn lookup(&self, type_idx: usize, r: u64) -> usize {
        assert!((1..=self.modulus).contains(&r), "r = {r} outside [1, {}]", self.modulus);
        self.table[type_idx][(r - 1) as usize]
    }

    /// Exact frequencies `|{r : μ*(t, r) = a}| / N`.
    pub fn frequencies(&self, type_idx: usize, actions: usize) -> Vec<Rational> {
        let mut counts = vec![0u64; actions];
        for &a in &self.table[type_idx] {
            counts[a] += 1;
        }
        counts
            .into_iter()
            .map(|c| Rational::new(c.into(), self.modulus.into()))
            .collect()
    }
}

/// Largest modulus we are willing to tabulate.
pub const MAX_MODULUS: u64 = 1 << 24;

pub fn build_sampler(mu: &CorrelatedProfile) -> Result<SamplerTable, EqError> {
    let mut n = BigInt::one();
    for d in mu.dists() {
        for p in d {
            if !p.is_zero() {
                n = n.lcm(p.denom());
            }
        }
    }
    let modulus = n
        .to_u64()
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or_else(|| EqError::ModulusTooLarge(n.to_string()))?;
    let nr = Rational::from_integer(n);
    let table = mu
        .dists()
        .iter()
        .map(|d| {
            let mut row = Vec::with_capacity(modulus as usize);
            for (a, p) in d.iter().enumerate() {
                let block = (p * &nr).to_integer().to_usize().expect("block fits");
                row.extend(std::iter::repeat(a).take(block));
            }
            row
        })
        .collect();
    Ok(SamplerTable { modulus, table })
}
