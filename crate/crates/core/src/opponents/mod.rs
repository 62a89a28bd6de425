//! Reference players: depth-limited Max-N, UCT Monte Carlo tree search and a
//! uniform-random player, plus the [`Policy`] trait that the evaluation
//! harness drives.

mod maxn;
mod mcts;

use std::fmt;
use std::str::FromStr;

pub use maxn::{cut_value, max_n_search, MaxNResult};
pub use mcts::{mcts_search, MctsConfig, MctsResult, DEFAULT_UCT_C};

use crate::agents::GreedyAgent;
use crate::error::{Error, Result};
use crate::game::{random_action, ActionId, Game, GameRng, GameState};

/// Anything that picks a move.
pub trait Policy: Send {
    fn name(&self) -> String;
    fn choose(&mut self, game: &dyn Game, s: &GameState, rng: &mut GameRng) -> Result<ActionId>;
}

/// Uniformly random legal moves.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomPlayer;

/// Uniformly random legal action; errors on terminal states.
pub fn random_player<G: Game + ?Sized>(game: &G, s: &GameState, rng: &mut GameRng) -> Result<ActionId> {
    random_action(game, s, rng)
}

impl Policy for RandomPlayer {
    fn name(&self) -> String {
        "random".into()
    }
    fn choose(&mut self, game: &dyn Game, s: &GameState, rng: &mut GameRng) -> Result<ActionId> {
        random_player(game, s, rng)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MaxNPlayer {
    pub depth: usize,
}

impl Policy for MaxNPlayer {
    fn name(&self) -> String {
        format!("maxn:{}", self.depth)
    }
    fn choose(&mut self, game: &dyn Game, s: &GameState, rng: &mut GameRng) -> Result<ActionId> {
        Ok(max_n_search(game, s, self.depth, rng)?.action)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MctsPlayer {
    pub config: MctsConfig,
}

impl Policy for MctsPlayer {
    fn name(&self) -> String {
        OpponentSpec::Mcts(self.config).to_string()
    }
    fn choose(&mut self, game: &dyn Game, s: &GameState, rng: &mut GameRng) -> Result<ActionId> {
        Ok(mcts_search(game, s, &self.config, rng)?.action)
    }
}

impl Policy for GreedyAgent {
    fn name(&self) -> String {
        "agent".into()
    }
    fn choose(&mut self, game: &dyn Game, s: &GameState, rng: &mut GameRng) -> Result<ActionId> {
        GreedyAgent::choose(self, game, s, rng)
    }
}

/// Opponent description as used in configs and on the command line:
/// `random`, `maxn:<depth>`, `mcts:<iterations>[:<c>[:<rollout cap>]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OpponentSpec {
    Random,
    MaxN { depth: usize },
    Mcts(MctsConfig),
}

impl OpponentSpec {
    pub fn build(&self) -> Box<dyn Policy> {
        match *self {
            OpponentSpec::Random => Box::new(RandomPlayer),
            OpponentSpec::MaxN { depth } => Box::new(MaxNPlayer { depth }),
            OpponentSpec::Mcts(config) => Box::new(MctsPlayer { config }),
        }
    }
}

impl FromStr for OpponentSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let parts: Vec<&str> = t.split(':').collect();
        let bad = || Error::InvalidSpec(format!("bad opponent spec '{s}' (random | maxn:D | mcts:I[:C[:CAP]])"));
        let num = |x: &str| x.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["random"] => Ok(OpponentSpec::Random),
            ["maxn", d] => {
                let depth = num(d)?;
                if depth == 0 {
                    return Err(Error::InvalidSpec("Max-N depth must be at least 1".into()));
                }
                Ok(OpponentSpec::MaxN { depth })
            }
            ["mcts", it, rest @ ..] if rest.len() <= 2 => {
                let mut cfg = MctsConfig::new(num(it)?);
                if cfg.iterations == 0 {
                    return Err(Error::InvalidSpec("MCTS needs at least one iteration".into()));
                }
                if let Some(c) = rest.first() {
                    cfg.c = c.parse::<f64>().ok().filter(|c| c.is_finite() && *c >= 0.0).ok_or_else(bad)?;
                }
                if let Some(cap) = rest.get(1) {
                    cfg.rollout_cap = Some(num(cap)?);
                }
                Ok(OpponentSpec::Mcts(cfg))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for OpponentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpponentSpec::Random => write!(f, "random"),
            OpponentSpec::MaxN { depth } => write!(f, "maxn:{depth}"),
            OpponentSpec::Mcts(c) => {
                write!(f, "mcts:{}", c.iterations)?;
                if c.c != DEFAULT_UCT_C || c.rollout_cap.is_some() {
                    write!(f, ":{}", c.c)?;
                }
                if let Some(cap) = c.rollout_cap {
                    write!(f, ":{cap}")?;
                }
                Ok(())
            }
        }
    }
}
