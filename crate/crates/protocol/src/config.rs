use mediatorless_equilibrium::{build_sampler, SamplerTable};
use mediatorless_game::{CorrelatedProfile, GameSpec};
use mediatorless_mpc::{build_lookup, Circuit, LookupLayout};
use mediatorless_sharing::{smallest_prime_above, Field};

use crate::ProtocolError;

/// Default cap on utility evaluations in one fallback best response.
pub const DEFAULT_BUDGET: usize = 1 << 22;

/// Everything the players agree on before a run.
#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub game: GameSpec,
    pub mu: CorrelatedProfile,
    pub k: usize,
    pub field: Field,
    pub sampler: SamplerTable,
    /// `μ*` as an arithmetic circuit over `field`.
    pub circuit: Circuit,
    pub layout: LookupLayout,
    /// Cap on utility evaluations in one fallback best response.
    pub budget: usize,
    /// Whether cheap-talk runs keep the full message history.
    pub record_history: bool,
}

impl ProtocolConfig {
    pub fn new(game: GameSpec, mu: CorrelatedProfile, k: usize) -> Result<Self, ProtocolError> {
        mu.check(&game)?;
        let n = game.players();
        if n <= 3 * k {
            return Err(ProtocolError::Params(format!("n = {n} must exceed 3k = {}", 3 * k)));
        }
        let sampler = build_sampler(&mu)?;
        let widest = |s: &[usize]| s.iter().copied().max().unwrap_or(1) as u64;
        let bound = (n as u64)
            .max(sampler.modulus)
            .max(widest(game.types().sizes()))
            .max(widest(game.actions().sizes()));
        let field = Field::new(smallest_prime_above(bound))?;
        let actions = game.actions().clone();
        let (circuit, layout) = build_lookup(&field, game.types().sizes(), sampler.modulus, |t, r| {
            actions.decode(sampler.lookup(t, r))
        });
        Ok(ProtocolConfig { game, mu, k, field, sampler, circuit, layout, budget: DEFAULT_BUDGET, record_history: true })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_history(mut self, record: bool) -> Self {
        self.record_history = record;
        self
    }

    pub fn players(&self) -> usize {
        self.game.players()
    }

    /// `N`, the range of the shared randomness `r ∈ [1, N]`.
    pub fn modulus(&self) -> u64 {
        self.sampler.modulus
    }

    /// Action profile `μ*(t', r)` for an effective type profile.
    pub fn recommend(&self, types: &[usize], r: u64) -> Vec<usize> {
        let t = self.game.types().index(types);
        self.game.actions().decode(self.sampler.lookup(t, r))
    }
}
