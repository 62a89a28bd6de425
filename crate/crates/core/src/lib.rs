//! N-player temporal-difference learning with n-tuple networks.
//!
//! The crate bundles seven board-game environments ([`games`]), the n-tuple
//! function approximator ([`ntuple`]), the episode drivers TD-FARL,
//! SARSA-FARL, Q-learning, SARSA and plain TD ([`agents`]), reference
//! opponents ([`opponents`]) and the experiment harness behind the `ntfarl`
//! binary ([`harness`]).

pub mod error;
pub mod game;
pub mod games;
pub mod ntuple;
pub mod agents;
pub mod opponents;
pub mod harness;

pub use error::{Error, Result};
pub use game::{ActionId, Game, GameRng, GameState, RewardTuple, Symmetry, SymmetrySet, Transition};
pub use games::{new_game, AnyGame, GameKind, GameSpec};
