use rand::Rng;

use crate::error::Result;
use crate::game::{ActionId, Game, GameRng, GameState};
use crate::ntuple::{NTupleNetwork, NetMode};

/// Index of a maximal score; ties are broken uniformly with `rng`. No
/// random number is drawn when the maximum is unique.
pub fn argmax_random_tie(scores: &[f64], rng: &mut GameRng) -> usize {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n_best = scores.iter().filter(|&&v| v == best).count();
    if n_best <= 1 {
        return scores.iter().position(|&v| v == best).unwrap_or(0);
    }
    let k = rng.gen_range(0..n_best);
    scores.iter().enumerate().filter(|(_, &v)| v == best).nth(k).map(|(i, _)| i).unwrap_or(0)
}

/// `r[p] + γ V(s')` for every legal action of `s`, in legal-action order.
/// Terminal afterstates are worth exactly 0.
pub fn afterstate_scores<G: Game + ?Sized>(
    game: &G,
    net: &NTupleNetwork,
    s: &GameState,
    gamma: f64,
    reward_scale: f64,
) -> Result<Vec<(ActionId, f64)>> {
    let p = s.player();
    let actions = game.legal_actions(s)?;
    Ok(actions
        .into_iter()
        .map(|a| {
            let after = game.compute_afterstate(s, a);
            let r = game.reward_tuple(s, &after)[p] * reward_scale;
            let v = if after.terminal { 0.0 } else { net.value(&after) };
            (a, r + gamma * v)
        })
        .collect())
}

/// `Q(s, a)` for every legal action of `s`.
pub fn action_scores<G: Game + ?Sized>(game: &G, net: &NTupleNetwork, s: &GameState) -> Result<Vec<(ActionId, f64)>> {
    let actions = game.legal_actions(s)?;
    let q = net.q_values(s, &actions)?;
    Ok(actions.into_iter().zip(q).collect())
}

fn explore<G: Game + ?Sized>(game: &G, s: &GameState, epsilon: f64, rng: &mut GameRng) -> Result<Option<ActionId>> {
    if epsilon > 0.0 && rng.gen::<f64>() < epsilon {
        let actions = game.legal_actions(s)?;
        return Ok(Some(actions[rng.gen_range(0..actions.len())]));
    }
    Ok(None)
}

fn pick(scored: &[(ActionId, f64)], rng: &mut GameRng) -> ActionId {
    let v: Vec<f64> = scored.iter().map(|x| x.1).collect();
    scored[argmax_random_tie(&v, rng)].0
}

/// ε-greedy over afterstate values. The flag reports an exploration move.
pub fn choose_action_td<G: Game + ?Sized>(
    game: &G,
    net: &NTupleNetwork,
    s: &GameState,
    epsilon: f64,
    gamma: f64,
    reward_scale: f64,
    rng: &mut GameRng,
) -> Result<(ActionId, bool)> {
    if let Some(a) = explore(game, s, epsilon, rng)? {
        return Ok((a, true));
    }
    let scored = afterstate_scores(game, net, s, gamma, reward_scale)?;
    Ok((pick(&scored, rng), false))
}

/// ε-greedy over `Q(s, ·)`.
pub fn choose_action_q<G: Game + ?Sized>(
    game: &G,
    net: &NTupleNetwork,
    s: &GameState,
    epsilon: f64,
    rng: &mut GameRng,
) -> Result<(ActionId, bool)> {
    if let Some(a) = explore(game, s, epsilon, rng)? {
        return Ok((a, true));
    }
    let scored = action_scores(game, net, s)?;
    Ok((pick(&scored, rng), false))
}

/// A trained network playing greedily (ε = 0).
#[derive(Clone, Debug)]
pub struct GreedyAgent {
    pub net: NTupleNetwork,
    pub gamma: f64,
    pub reward_scale: f64,
}

impl GreedyAgent {
    pub fn new(net: NTupleNetwork) -> Self {
        GreedyAgent { net, gamma: 1.0, reward_scale: 1.0 }
    }

    /// Action scores as the agent sees them: afterstate values for value
    /// nets, `Q(s, a)` for action nets.
    pub fn scores<G: Game + ?Sized>(&self, game: &G, s: &GameState) -> Result<Vec<(ActionId, f64)>> {
        match self.net.mode() {
            NetMode::Value => afterstate_scores(game, &self.net, s, self.gamma, self.reward_scale),
            NetMode::Action { .. } => action_scores(game, &self.net, s),
        }
    }

    pub fn choose<G: Game + ?Sized>(&self, game: &G, s: &GameState, rng: &mut GameRng) -> Result<ActionId> {
        let scored = self.scores(game, s)?;
        Ok(pick(&scored, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;

    #[test]
    fn unique_max_draws_nothing() {
        let mut a = rng_from_seed(1);
        let mut b = rng_from_seed(1);
        assert_eq!(argmax_random_tie(&[0.1, 0.7, 0.3], &mut a), 1);
        assert_eq!(a.gen::<u64>(), b.gen::<u64>());
    }

    #[test]
    fn ties_cover_all_maximisers() {
        let mut rng = rng_from_seed(2);
        let mut seen = [0usize; 4];
        for _ in 0..400 {
            seen[argmax_random_tie(&[1.0, 0.0, 1.0, 1.0], &mut rng)] += 1;
        }
        assert_eq!(seen[1], 0);
        assert!(seen[0] > 80 && seen[2] > 80 && seen[3] > 80);
    }
}
