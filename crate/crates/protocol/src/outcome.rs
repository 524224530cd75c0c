use mediatorless_game::rational::serde_rat_vec;
use mediatorless_game::{GameSpec, Rational};
use serde::{Deserialize, Serialize};

/// Result of one run of a mediator game or of the cheap-talk protocol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    /// True types.
    pub types: Vec<usize>,
    /// Types the recommendation was computed from, defaults applied.
    pub effective_types: Vec<usize>,
    /// Action recommended to each player, when one reached it.
    pub recommendations: Vec<Option<usize>>,
    pub actions: Vec<usize>,
    #[serde(with = "serde_rat_vec")]
    pub payoffs: Vec<Rational>,
    /// Players that chose by best response instead of a recommendation.
    pub fallback: Vec<bool>,
    pub flags: Vec<String>,
}

impl OutcomeRecord {
    pub(crate) fn settle(&mut self, game: &GameSpec) {
        let t = game.types().index(&self.types);
        let a = game.actions().index(&self.actions);
        self.payoffs = game.payoffs(t, a).to_vec();
    }

    pub fn action_index(&self, game: &GameSpec) -> usize {
        game.actions().index(&self.actions)
    }
}
