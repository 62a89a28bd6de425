use std::collections::HashMap;

use crate::agents::argmax_random_tie;
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, GameRng, GameState, RewardTuple, StateKey};

/// Value assigned to each player at a depth cut: an equal split of the
/// total reward (0.5 each with two players, 0.4 each in Nim3P).
pub fn cut_value(players: usize) -> f64 {
    match players {
        1 => 0.0,
        2 => 0.5,
        _ => 0.4,
    }
}

/// Result of a Max-N search from one state.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxNResult {
    pub action: ActionId,
    /// Backed-up value tuple of the root (first maximiser in legal-action
    /// order, so it depends on the state only).
    pub value: RewardTuple,
    /// `(action, r + backed-up value)` for every legal root action.
    pub action_values: Vec<(ActionId, RewardTuple)>,
}

struct Search<'a, G: Game + ?Sized> {
    game: &'a G,
    n: usize,
    memo: HashMap<(StateKey, usize), RewardTuple>,
}

impl<G: Game + ?Sized> Search<'_, G> {
    fn child_value(&mut self, s: &GameState, a: ActionId, depth: usize) -> RewardTuple {
        let next = self.game.compute_afterstate(s, a);
        let r = self.game.reward_tuple(s, &next);
        let tail = self.value(&next, depth - 1);
        let mut total = RewardTuple::zeros(self.n);
        for q in 0..self.n {
            total.set(q, r[q] + tail[q]);
        }
        total
    }

    fn value(&mut self, s: &GameState, depth: usize) -> RewardTuple {
        if s.terminal {
            return RewardTuple::zeros(self.n);
        }
        if depth == 0 {
            return RewardTuple::splat(self.n, cut_value(self.n));
        }
        let key = (s.key(), depth);
        if let Some(v) = self.memo.get(&key) {
            return *v;
        }
        let p = s.player();
        let mut best: Option<RewardTuple> = None;
        let mut actions = Vec::new();
        self.game.legal_actions_into(s, &mut actions);
        for a in actions {
            let v = self.child_value(s, a, depth);
            if best.map_or(true, |b| v[p] > b[p]) {
                best = Some(v);
            }
        }
        let v = best.expect("non-terminal state has a legal action");
        self.memo.insert(key, v);
        v
    }
}

/// Depth-limited Max-N: every mover maximises its own component of the
/// backed-up reward tuple. Terminal leaves are worth 0 beyond the rewards
/// collected on the way, depth cuts are worth [`cut_value`] each. The
/// returned action is uniform among the root maximisers.
pub fn max_n_search<G: Game + ?Sized>(game: &G, s: &GameState, depth: usize, rng: &mut GameRng) -> Result<MaxNResult> {
    if !game.is_deterministic() {
        return Err(Error::Unsupported(format!("Max-N needs a deterministic game, {} has chance moves", game.name())));
    }
    if depth == 0 {
        return Err(Error::InvalidParam("Max-N depth must be at least 1".into()));
    }
    let actions = game.legal_actions(s)?;
    let mut search = Search { game, n: game.num_players(), memo: HashMap::new() };
    let p = s.player();
    let action_values: Vec<(ActionId, RewardTuple)> =
        actions.iter().map(|&a| (a, search.child_value(s, a, depth))).collect();
    let mut value = action_values[0].1;
    for (_, v) in &action_values[1..] {
        if v[p] > value[p] {
            value = *v;
        }
    }
    let mover: Vec<f64> = action_values.iter().map(|(_, v)| v[p]).collect();
    let action = action_values[argmax_random_tie(&mover, rng)].0;
    Ok(MaxNResult { action, value, action_values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;
    use crate::games::{Nim, TicTacToe};

    #[test]
    fn takes_the_immediate_win() {
        let g = TicTacToe;
        let s = g.state_from_str("XX.OO....");
        let r = max_n_search(&g, &s, 1, &mut rng_from_seed(0)).unwrap();
        assert_eq!(r.action, ActionId(2));
        assert_eq!(r.value.as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn misere_two_stones_take_one() {
        let g = Nim::new(3, 5, 2);
        let s = g.state_from_heaps(&[0, 0, 2], 0);
        let r = max_n_search(&g, &s, 2, &mut rng_from_seed(0)).unwrap();
        assert_eq!(r.value[0], 1.0);
        let next = g.compute_afterstate(&s, r.action);
        assert_eq!(&next.cells[..], &[0, 0, 1]);
    }

    #[test]
    fn empty_board_is_a_draw() {
        let g = TicTacToe;
        let s = g.initial_state(&mut rng_from_seed(0));
        let r = max_n_search(&g, &s, 10, &mut rng_from_seed(1)).unwrap();
        assert_eq!(r.value.as_slice(), &[0.5, 0.5]);
        assert_eq!(r.action_values.len(), 9);
    }

    #[test]
    fn depth_cut_uses_equal_split() {
        let g = TicTacToe;
        let s = g.initial_state(&mut rng_from_seed(0));
        let r = max_n_search(&g, &s, 1, &mut rng_from_seed(1)).unwrap();
        assert_eq!(r.value.as_slice(), &[0.5, 0.5]);
        let g3 = Nim::new(3, 5, 3);
        let r = max_n_search(&g3, &g3.initial_state(&mut rng_from_seed(0)), 1, &mut rng_from_seed(1)).unwrap();
        assert_eq!(r.value.as_slice(), &[0.4, 0.4, 0.4]);
    }
}
