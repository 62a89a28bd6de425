use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{Game, GameState, RewardTuple, StateKey};

/// Node budget used when callers do not pick one. Large enough for
/// TicTacToe (5478 positions) and Nim3P 3x5 (216 heap configurations x 3).
pub const DEFAULT_ORACLE_BUDGET: usize = 2_000_000;

/// Perfect-play future reward tuple of `s` by exhaustive Max-N.
///
/// Each mover maximises its own component of (delta reward + successor
/// value); among equal maximisers the first legal action wins, so the tuple
/// is a function of the state alone. Terminal states are worth zero.
pub fn game_oracle_value<G: Game + ?Sized>(game: &G, s: &GameState, budget: usize) -> Result<RewardTuple> {
    if !game.is_deterministic() {
        return Err(Error::Unsupported(format!("{} has chance moves", game.name())));
    }
    let mut memo = HashMap::new();
    solve(game, s, budget, &mut memo)
}

fn solve<G: Game + ?Sized>(
    game: &G,
    s: &GameState,
    budget: usize,
    memo: &mut HashMap<StateKey, RewardTuple>,
) -> Result<RewardTuple> {
    let n = game.num_players();
    if s.terminal {
        return Ok(RewardTuple::zeros(n));
    }
    if let Some(v) = memo.get(&s.key()) {
        return Ok(*v);
    }
    if memo.len() >= budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let p = s.player();
    let mut best: Option<RewardTuple> = None;
    for a in game.legal_actions(s)? {
        let next = game.compute_afterstate(s, a);
        let r = game.reward_tuple(s, &next);
        let tail = solve(game, &next, budget, memo)?;
        let mut total = RewardTuple::zeros(n);
        for q in 0..n {
            total.set(q, r[q] + tail[q]);
        }
        if best.map_or(true, |b| total[p] > b[p]) {
            best = Some(total);
        }
    }
    let v = best.expect("non-terminal state has a legal action");
    memo.insert(s.key(), v);
    Ok(v)
}
