use rand::Rng;

use crate::agents::params::{AgentParams, Algorithm};
use crate::agents::policy::{action_scores, choose_action_q, choose_action_td};
use crate::error::{Error, Result};
use crate::game::{random_action, ActionId, Game, GameRng, GameState, RewardTuple, MAX_PLAYERS};
use crate::ntuple::{EligibilityHorizon, EligibilityMode, NTupleNetwork};

/// Learning rate and exploration rate for one episode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepParams {
    pub alpha: f64,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateKind {
    /// Regular per-move update of the mover's previous state.
    Step,
    /// Final adaptation of a player who did not make the last move.
    FinalOther,
    /// Final adaptation of the last mover's terminal afterstate towards 0.
    FinalTerminal,
}

/// One call of the TD(λ) update, as seen by the episode driver.
#[derive(Clone, Debug, PartialEq)]
pub struct UpdateEvent {
    pub kind: UpdateKind,
    pub player: usize,
    /// Number of moves made in the episode when the update happened.
    pub at_move: usize,
    /// Move index that produced the adapted state.
    pub source_move: usize,
    /// Cells of the adapted state.
    pub cells: Vec<u8>,
    pub action: Option<ActionId>,
    pub value: f64,
    pub target: f64,
    pub delta: f64,
    pub applied: bool,
}

/// Per-player memory of an episode in progress.
#[derive(Clone, Debug)]
pub struct EpisodeContext {
    pub s_last: Vec<Option<GameState>>,
    pub a_last: Vec<Option<ActionId>>,
    pub made_at: Vec<usize>,
    pub horizons: Vec<EligibilityHorizon>,
}

impl EpisodeContext {
    pub fn new(players: usize, params: &AgentParams) -> Result<Self> {
        let h = params.horizon()?;
        Ok(EpisodeContext {
            s_last: vec![None; players],
            a_last: vec![None; players],
            made_at: vec![0; players],
            horizons: (0..players).map(|_| EligibilityHorizon::new(h, params.lambda, params.eligibility)).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeStats {
    pub moves: usize,
    pub random_moves: usize,
    pub updates: usize,
    pub skipped_updates: usize,
    pub final_state: GameState,
}

struct Runner<'a, G: Game + ?Sized> {
    game: &'a G,
    net: &'a mut NTupleNetwork,
    params: &'a AgentParams,
    step: StepParams,
    scale: f64,
    ctx: EpisodeContext,
    log: Option<&'a mut Vec<UpdateEvent>>,
    moves: usize,
    random_moves: usize,
    updates: usize,
    skipped: usize,
}

impl<'a, G: Game + ?Sized> Runner<'a, G> {
    fn new(
        game: &'a G,
        net: &'a mut NTupleNetwork,
        params: &'a AgentParams,
        step: StepParams,
        log: Option<&'a mut Vec<UpdateEvent>>,
    ) -> Result<Self> {
        Ok(Runner {
            game,
            net,
            params,
            step,
            scale: reward_scale(game, params),
            ctx: EpisodeContext::new(game.num_players(), params)?,
            log,
            moves: 0,
            random_moves: 0,
            updates: 0,
            skipped: 0,
        })
    }

    fn reward(&self, r: &RewardTuple, p: usize) -> f64 {
        r[p] * self.scale
    }

    fn choose_td(&mut self, s: &GameState, rng: &mut GameRng) -> Result<(ActionId, bool)> {
        choose_action_td(self.game, self.net, s, self.step.epsilon, self.params.gamma, self.scale, rng)
    }

    fn choose_q(&mut self, s: &GameState, rng: &mut GameRng) -> Result<(ActionId, bool)> {
        choose_action_q(self.game, self.net, s, self.step.epsilon, rng)
    }

    fn q(&self, s: &GameState, a: ActionId) -> Result<f64> {
        self.net.q_value(s, a)
    }

    /// Moves `s` one step; updates move counters.
    fn make(&mut self, s: &GameState, a: ActionId, random: bool, rng: &mut GameRng) -> Result<crate::game::Transition> {
        let tr = self.game.make_action(s, a, self.params.t_after, rng)?;
        self.moves += 1;
        self.random_moves += random as usize;
        Ok(tr)
    }

    /// Records `(state, action)` as player `p`'s newest horizon entry.
    fn remember(&mut self, p: usize, s: GameState, a: Option<ActionId>, random: bool) -> Result<()> {
        let act = match a {
            Some(a) => self.net.action_activation(&s, a)?,
            None => self.net.activation(&s)?,
        };
        let hz = &mut self.ctx.horizons[p];
        if random && hz.mode() == EligibilityMode::Reset {
            hz.clear();
        }
        hz.push(act);
        self.ctx.s_last[p] = Some(s);
        self.ctx.a_last[p] = a;
        self.ctx.made_at[p] = self.moves;
        Ok(())
    }

    /// Pulls player `p`'s newest horizon entry towards `target`.
    fn adapt(&mut self, kind: UpdateKind, p: usize, target: f64, random: bool) -> Result<()> {
        let hz = &mut self.ctx.horizons[p];
        let entry = hz.newest().ok_or_else(|| Error::InvalidParam("adapt on an empty horizon".into()))?;
        let value = self.net.output(&entry.act);
        let delta = target - value;
        let applied = self.net.td_lambda_update(hz, delta, self.step.alpha, self.params.learn_from_rm, random);
        if applied {
            self.updates += 1;
        } else {
            self.skipped += 1;
        }
        if let Some(log) = self.log.as_deref_mut() {
            log.push(UpdateEvent {
                kind,
                player: p,
                at_move: self.moves,
                source_move: self.ctx.made_at[p],
                cells: self.ctx.s_last[p].map(|s| s.cells.to_vec()).unwrap_or_default(),
                action: self.ctx.a_last[p],
                value,
                target,
                delta,
                applied,
            });
        }
        Ok(())
    }

    fn finish(self, final_state: GameState) -> EpisodeStats {
        EpisodeStats {
            moves: self.moves,
            random_moves: self.random_moves,
            updates: self.updates,
            skipped_updates: self.skipped,
            final_state,
        }
    }
}

/// Multiplier applied to rewards: `1 / (hi - lo)` when normalising.
pub fn reward_scale<G: Game + ?Sized>(game: &G, params: &AgentParams) -> f64 {
    if !params.normalize {
        return 1.0;
    }
    let (lo, hi) = game.reward_range();
    if hi > lo {
        1.0 / (hi - lo)
    } else {
        1.0
    }
}

/// Episode start: the standard opening or, with `choose_start_01`, with
/// probability 1/2 the state after one random first move.
pub fn start_state<G: Game + ?Sized>(game: &G, params: &AgentParams, rng: &mut GameRng) -> Result<GameState> {
    let s0 = game.initial_state(rng);
    if params.choose_start_01 && !s0.terminal && rng.gen_bool(0.5) {
        let a = random_action(game, &s0, rng)?;
        let next = game.make_action(&s0, a, true, rng)?.next_state;
        if !next.terminal {
            return Ok(next);
        }
    }
    Ok(s0)
}

fn check_mode(net: &NTupleNetwork, action_net: bool) -> Result<()> {
    match (net.mode(), action_net) {
        (crate::ntuple::NetMode::Value, false) | (crate::ntuple::NetMode::Action { .. }, true) => Ok(()),
        (_, true) => Err(Error::ModeMismatch("this algorithm needs an action net")),
        (_, false) => Err(Error::ModeMismatch("this algorithm needs a value net")),
    }
}

/// Runs one training episode of `algorithm` from `start`.
#[allow(clippy::too_many_arguments)]
pub fn run_episode<G: Game + ?Sized>(
    algorithm: Algorithm,
    game: &G,
    net: &mut NTupleNetwork,
    params: &AgentParams,
    step: StepParams,
    start: GameState,
    rng: &mut GameRng,
    log: Option<&mut Vec<UpdateEvent>>,
) -> Result<EpisodeStats> {
    match algorithm {
        Algorithm::TdFarl => td_farl_episode(game, net, params, step, start, rng, log),
        Algorithm::TdPlain => td_plain_episode(game, net, params, step, start, rng, log),
        Algorithm::SarsaFarl => sarsa_farl_episode(game, net, params, step, start, rng, log),
        Algorithm::QLearn => per_player_q_episode(false, game, net, params, step, start, rng, log),
        Algorithm::Sarsa => per_player_q_episode(true, game, net, params, step, start, rng, log),
    }
}

/// Player-centric TD over afterstates with final adaptation.
///
/// Each mover `p` updates its own previous afterstate `sLast[p]` towards
/// `r[p] + γ V(s')`. When the game ends every other player pulls its last
/// afterstate towards its final reward, and the last mover pulls the
/// terminal afterstate towards 0.
pub fn td_farl_episode<G: Game + ?Sized>(
    game: &G,
    net: &mut NTupleNetwork,
    params: &AgentParams,
    step: StepParams,
    start: GameState,
    rng: &mut GameRng,
    log: Option<&mut Vec<UpdateEvent>>,
) -> Result<EpisodeStats> {
    check_mode(net, false)?;
    let mut run = Runner::new(game, net, params, step, log)?;
    let mut s = start;
    while !s.terminal {
        let p = s.player();
        let (a, random) = run.choose_td(&s, rng)?;
        let tr = run.make(&s, a, random, rng)?;
        if run.ctx.s_last[p].is_some() {
            let target = run.reward(&tr.rewards, p) + params.gamma * run.net.value(&tr.afterstate);
            run.adapt(UpdateKind::Step, p, target, random)?;
        }
        run.remember(p, tr.afterstate, None, random)?;
        if tr.next_state.terminal {
            final_adapt_agents_v(&mut run, p, &tr.rewards, random)?;
        }
        s = tr.next_state;
    }
    Ok(run.finish(s))
}

fn final_adapt_agents_v<G: Game + ?Sized>(run: &mut Runner<'_, G>, last: usize, rewards: &RewardTuple, random: bool) -> Result<()> {
    if !run.params.farl_enabled {
        return Ok(());
    }
    for p in 0..run.game.num_players() {
        if p != last && run.ctx.s_last[p].is_some() {
            let target = run.reward(rewards, p);
            run.adapt(UpdateKind::FinalOther, p, target, random)?;
        }
    }
    if run.params.farl_terminal_zero {
        run.adapt(UpdateKind::FinalTerminal, last, 0.0, random)?;
    }
    Ok(())
}

/// Per-player TD over afterstates: each player chains its own afterstates
/// `s'_{t-1} -> s'_t`; no final adaptation of the other players. With
/// `farl_enabled && farl_terminal_zero` the last afterstate is pulled to 0.
pub fn td_plain_episode<G: Game + ?Sized>(
    game: &G,
    net: &mut NTupleNetwork,
    params: &AgentParams,
    step: StepParams,
    start: GameState,
    rng: &mut GameRng,
    log: Option<&mut Vec<UpdateEvent>>,
) -> Result<EpisodeStats> {
    check_mode(net, false)?;
    let mut run = Runner::new(game, net, params, step, log)?;
    let mut prev_seen = [false; MAX_PLAYERS];
    let mut s = start;
    let mut last = (0usize, false);
    while !s.terminal {
        let p = s.player();
        let (a, random) = run.choose_td(&s, rng)?;
        let tr = run.make(&s, a, random, rng)?;
        if prev_seen[p] {
            let v_next = run.net.value(&tr.afterstate);
            let target = run.reward(&tr.rewards, p) + params.gamma * v_next;
            run.adapt(UpdateKind::Step, p, target, random)?;
        }
        run.remember(p, tr.afterstate, None, random)?;
        prev_seen[p] = true;
        last = (p, random);
        s = tr.next_state;
    }
    if params.farl_enabled && params.farl_terminal_zero && prev_seen[last.0] {
        run.adapt(UpdateKind::FinalTerminal, last.0, 0.0, last.1)?;
    }
    Ok(run.finish(s))
}

/// Player-centric SARSA over `(state, action)` pairs with final adaptation.
///
/// After each move the player `p''` now to move updates its previous pair
/// towards `r[p''] + γ Q(s'', a'')`, with the bootstrap 0 at terminal states.
pub fn sarsa_farl_episode<G: Game + ?Sized>(
    game: &G,
    net: &mut NTupleNetwork,
    params: &AgentParams,
    step: StepParams,
    start: GameState,
    rng: &mut GameRng,
    log: Option<&mut Vec<UpdateEvent>>,
) -> Result<EpisodeStats> {
    check_mode(net, true)?;
    let mut run = Runner::new(game, net, params, step, log)?;
    let mut s = start;
    if s.terminal {
        return Ok(run.finish(s));
    }
    let (mut a, mut random) = run.choose_q(&s, rng)?;
    run.remember(s.player(), s, Some(a), random)?;
    loop {
        let tr = run.make(&s, a, random, rng)?;
        let s2 = tr.next_state;
        let pn = s2.player();
        if run.ctx.s_last[pn].is_some() {
            let bootstrap = if s2.terminal {
                0.0
            } else {
                let (a_probe, _) = run.choose_q(&s2, rng)?;
                run.q(&s2, a_probe)?
            };
            let target = run.reward(&tr.rewards, pn) + params.gamma * bootstrap;
            run.adapt(UpdateKind::Step, pn, target, random)?;
        }
        if s2.terminal {
            if params.farl_enabled {
                for p in 0..game.num_players() {
                    if p != pn && run.ctx.s_last[p].is_some() {
                        let target = run.reward(&tr.rewards, p);
                        run.adapt(UpdateKind::FinalOther, p, target, random)?;
                    }
                }
            }
            return Ok(run.finish(s2));
        }
        let (a2, random2) = run.choose_q(&s2, rng)?;
        run.remember(pn, s2, Some(a2), random2)?;
        s = s2;
        a = a2;
        random = random2;
    }
}

struct Pending {
    reward: f64,
    random: bool,
}

/// Per-player Q-learning (`sarsa == false`) or SARSA over an action net.
///
/// Each player's step runs from its own action to its next turn; the
/// rewards of all intervening moves are summed. The bootstrap is
/// `max_a Q(s, a)` (Q-learning) or `Q(s, a_next)` for a freshly drawn
/// ε-greedy `a_next` (SARSA), and 0 at terminal states. At the end the last
/// mover always updates; other players do so only with `farl_enabled`.
#[allow(clippy::too_many_arguments)]
pub fn per_player_q_episode<G: Game + ?Sized>(
    sarsa: bool,
    game: &G,
    net: &mut NTupleNetwork,
    params: &AgentParams,
    step: StepParams,
    start: GameState,
    rng: &mut GameRng,
    log: Option<&mut Vec<UpdateEvent>>,
) -> Result<EpisodeStats> {
    check_mode(net, true)?;
    let mut run = Runner::new(game, net, params, step, log)?;
    let n = game.num_players();
    let mut pending: Vec<Option<Pending>> = (0..n).map(|_| None).collect();
    let mut s = start;
    while !s.terminal {
        let p = s.player();
        if let Some(pd) = pending[p].take() {
            let bootstrap = if sarsa {
                let (a_next, _) = run.choose_q(&s, rng)?;
                run.q(&s, a_next)?
            } else {
                action_scores(game, run.net, &s)?.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max)
            };
            run.adapt(UpdateKind::Step, p, pd.reward + params.gamma * bootstrap, pd.random)?;
        }
        let (a, random) = run.choose_q(&s, rng)?;
        run.remember(p, s, Some(a), random)?;
        pending[p] = Some(Pending { reward: 0.0, random });
        let tr = run.make(&s, a, random, rng)?;
        for (q, pd) in pending.iter_mut().enumerate() {
            if let Some(pd) = pd {
                pd.reward += tr.rewards[q] * run.scale;
            }
        }
        if tr.next_state.terminal {
            for q in 0..n {
                if let Some(pd) = pending[q].take() {
                    if q == p {
                        run.adapt(UpdateKind::Step, q, pd.reward, pd.random)?;
                    } else if params.farl_enabled {
                        run.adapt(UpdateKind::FinalOther, q, pd.reward, pd.random)?;
                    }
                }
            }
        }
        s = tr.next_state;
    }
    Ok(run.finish(s))
}
