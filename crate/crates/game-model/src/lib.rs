//! Exact-rational games: normal-form games are Bayesian games whose type
//! sets are singletons, so one representation covers both.
//!
//! Type and action sets are index based (`0..m`) with optional labels.
//! Profiles are index tuples enumerated in lexicographic order, first
//! player most significant.

mod coalition;
pub mod corpus;
mod error;
mod file;
mod game;
mod profile;
pub mod rational;
mod space;

pub use coalition::CoalitionMask;
pub use error::{GameError, Violation};
pub use file::{GameFile, MuFile, ProfileFile, GAME_SCHEMA, MU_SCHEMA, PROFILE_SCHEMA};
pub use game::GameSpec;
pub use profile::{
    coalition_expected_utility, expected_utility, CorrelatedProfile, StrategyProfile,
};
pub use rational::Rational;
pub use space::ProfileSpace;
