use std::fmt;

use serde::Serialize;

/// One broken invariant of a game or profile, naming the offending field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub reason: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Violation { field: field.into(), reason: reason.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("invalid game: {}", join(.0))]
    InvalidGame(Vec<Violation>),
    #[error("invalid profile: {}", join(.0))]
    InvalidProfile(Vec<Violation>),
    #[error("profile does not match game: {0}")]
    DomainMismatch(String),
    #[error("player {player} is not a member of coalition {members:?}")]
    NotInCoalition { player: usize, members: Vec<usize> },
    #[error("coalition {members:?} invalid for bound {k} and {n} players")]
    BadCoalition { members: Vec<usize>, k: usize, n: usize },
    #[error("unsupported schema {found:?}, expected {expected:?}")]
    Schema { found: String, expected: &'static str },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
