use rand::Rng;

use crate::agents::argmax_random_tie;
use crate::error::{Error, Result};
use crate::game::{ActionId, Game, GameRng, GameState, RewardTuple, MAX_PLAYERS};
use crate::opponents::maxn::cut_value;

pub const DEFAULT_UCT_C: f64 = std::f64::consts::SQRT_2;

/// UCT settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MctsConfig {
    pub iterations: usize,
    pub c: f64,
    /// Maximum rollout length; a cut rollout scores the equal split.
    pub rollout_cap: Option<usize>,
}

impl MctsConfig {
    pub fn new(iterations: usize) -> Self {
        MctsConfig { iterations, c: DEFAULT_UCT_C, rollout_cap: None }
    }
}

struct Node {
    state: GameState,
    action: Option<ActionId>,
    children: Vec<usize>,
    untried: Vec<ActionId>,
    visits: u64,
    reward_sum: [f64; MAX_PLAYERS],
}

/// Root statistics of one search.
#[derive(Clone, Debug, PartialEq)]
pub struct MctsResult {
    pub action: ActionId,
    /// `(action, visits, mean reward of the root mover)` per expanded child.
    pub children: Vec<(ActionId, u64, f64)>,
}

impl MctsResult {
    pub fn total_visits(&self) -> u64 {
        self.children.iter().map(|c| c.1).sum()
    }
}

/// UCT search. Each iteration selects by `mean_p + c sqrt(ln N / n)` for the
/// mover `p` of the parent, expands one untried child, rolls out uniformly
/// at random and adds the rollout's reward tuple (measured from `s`) to
/// every node on the path. Returns the most visited root action.
pub fn mcts_search<G: Game + ?Sized>(game: &G, s: &GameState, cfg: &MctsConfig, rng: &mut GameRng) -> Result<MctsResult> {
    if !game.is_deterministic() {
        return Err(Error::Unsupported(format!("MCTS needs a deterministic game, {} has chance moves", game.name())));
    }
    if cfg.iterations == 0 {
        return Err(Error::InvalidParam("MCTS needs at least one iteration".into()));
    }
    let root_actions = game.legal_actions(s)?;
    let n = game.num_players();
    let mut nodes = vec![Node {
        state: *s,
        action: None,
        children: Vec::new(),
        untried: root_actions,
        visits: 0,
        reward_sum: [0.0; MAX_PLAYERS],
    }];
    let mut path = Vec::new();
    let mut buf = Vec::new();
    for _ in 0..cfg.iterations {
        path.clear();
        let mut v = 0usize;
        path.push(v);
        while nodes[v].untried.is_empty() && !nodes[v].children.is_empty() {
            let p = nodes[v].state.player();
            let ln_n = (nodes[v].visits as f64).ln();
            let mut best = f64::NEG_INFINITY;
            let mut pick = nodes[v].children[0];
            for &c in &nodes[v].children {
                let ch = &nodes[c];
                let u = ch.reward_sum[p] / ch.visits as f64 + cfg.c * (ln_n / ch.visits as f64).sqrt();
                if u > best {
                    best = u;
                    pick = c;
                }
            }
            v = pick;
            path.push(v);
        }
        if !nodes[v].untried.is_empty() {
            let k = rng.gen_range(0..nodes[v].untried.len());
            let a = nodes[v].untried.swap_remove(k);
            let child_state = game.compute_afterstate(&nodes[v].state, a);
            let mut untried = Vec::new();
            if !child_state.terminal {
                game.legal_actions_into(&child_state, &mut untried);
            }
            nodes.push(Node {
                state: child_state,
                action: Some(a),
                children: Vec::new(),
                untried,
                visits: 0,
                reward_sum: [0.0; MAX_PLAYERS],
            });
            let c = nodes.len() - 1;
            nodes[v].children.push(c);
            v = c;
            path.push(v);
        }
        let outcome = rollout(game, s, &nodes[v].state, cfg.rollout_cap, &mut buf, rng);
        for &u in &path {
            nodes[u].visits += 1;
            for q in 0..n {
                nodes[u].reward_sum[q] += outcome[q];
            }
        }
    }
    let p = s.player();
    let children: Vec<(ActionId, u64, f64)> = nodes[0]
        .children
        .iter()
        .map(|&c| {
            let ch = &nodes[c];
            (ch.action.expect("child has an action"), ch.visits, ch.reward_sum[p] / ch.visits.max(1) as f64)
        })
        .collect();
    let visits: Vec<f64> = children.iter().map(|c| c.1 as f64).collect();
    let action = children[argmax_random_tie(&visits, rng)].0;
    Ok(MctsResult { action, children })
}

/// Plays uniformly random moves from `from`; returns scores gained since `root`.
fn rollout<G: Game + ?Sized>(
    game: &G,
    root: &GameState,
    from: &GameState,
    cap: Option<usize>,
    buf: &mut Vec<ActionId>,
    rng: &mut GameRng,
) -> RewardTuple {
    let n = game.num_players();
    let mut s = *from;
    let mut steps = 0;
    let mut cut = false;
    while !s.terminal {
        if cap.is_some_and(|c| steps >= c) {
            cut = true;
            break;
        }
        buf.clear();
        game.legal_actions_into(&s, buf);
        let a = buf[rng.gen_range(0..buf.len())];
        s = game.compute_afterstate(&s, a);
        steps += 1;
    }
    let mut out = RewardTuple::zeros(n);
    for q in 0..n {
        out.set(q, s.scores[q] - root.scores[q] + if cut { cut_value(n) } else { 0.0 });
    }
    out
}
