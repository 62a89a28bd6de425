use std::io::Write;

use crate::agents::episode::{run_episode, start_state, StepParams};
use crate::agents::params::{AgentParams, Algorithm};
use crate::error::Result;
use crate::game::{Game, GameRng};
use crate::ntuple::{NTupleNetwork, TupleLayout};

/// One row of a learning curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub episode: usize,
    pub eval_opponent: String,
    /// Mean agent reward in multi-player games; empty for single-player.
    pub win_rate: Option<f64>,
    pub score_mean: f64,
    pub score_sd: f64,
    pub active_weight_fraction: f64,
    pub alpha: f64,
    pub epsilon: f64,
}

pub const CURVE_HEADER: [&str; 8] =
    ["episode", "eval_opponent", "win_rate", "score_mean", "score_sd", "active_weight_fraction", "alpha", "epsilon"];

pub fn write_curve_csv<W: Write>(out: W, points: &[CurvePoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for p in points {
        w.write_record([
            p.episode.to_string(),
            p.eval_opponent.clone(),
            p.win_rate.map_or(String::new(), |w| w.to_string()),
            p.score_mean.to_string(),
            p.score_sd.to_string(),
            p.active_weight_fraction.to_string(),
            p.alpha.to_string(),
            p.epsilon.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Fresh zero-weight network for `algorithm` with tuples drawn from `layout`.
pub fn build_network<G: Game + ?Sized>(
    game: &G,
    algorithm: Algorithm,
    params: &AgentParams,
    layout: &TupleLayout,
    rng: &mut GameRng,
) -> Result<NTupleNetwork> {
    params.validate()?;
    let tuples = layout.generate(game, rng)?;
    let mut net =
        NTupleNetwork::for_game(game, tuples, algorithm.uses_action_net(), params.sigma, params.use_symmetry, params.tcl)?;
    net.set_meta(format!("game={} algorithm={algorithm} layout={layout}", game.name()));
    Ok(net)
}

/// Totals over a training run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainSummary {
    pub episodes: usize,
    pub moves: usize,
    pub random_moves: usize,
    pub updates: usize,
    pub skipped_updates: usize,
    pub curve: Vec<CurvePoint>,
}

/// Checkpoint callback: `(episodes done, net, alpha, epsilon)` to curve rows.
pub type Checkpoint<'a> = dyn FnMut(usize, &NTupleNetwork, f64, f64) -> Result<Vec<CurvePoint>> + 'a;

/// Trains `net` for `params.train_episodes` self-play episodes with linear
/// α and ε schedules, calling `checkpoint` after every `params.num_eval`
/// episodes.
pub fn train<G: Game + ?Sized>(
    game: &G,
    net: &mut NTupleNetwork,
    algorithm: Algorithm,
    params: &AgentParams,
    rng: &mut GameRng,
    checkpoint: Option<&mut Checkpoint<'_>>,
) -> Result<TrainSummary> {
    params.validate()?;
    let mut checkpoint = checkpoint;
    let mut sum = TrainSummary::default();
    for e in 0..params.train_episodes {
        let step = StepParams { alpha: params.alpha_at(e), epsilon: params.epsilon_at(e) };
        let s0 = start_state(game, params, rng)?;
        let st = run_episode(algorithm, game, net, params, step, s0, rng, None)?;
        sum.episodes += 1;
        sum.moves += st.moves;
        sum.random_moves += st.random_moves;
        sum.updates += st.updates;
        sum.skipped_updates += st.skipped_updates;
        if (e + 1) % params.num_eval == 0 {
            if let Some(cb) = checkpoint.as_deref_mut() {
                let rows = cb(e + 1, net, step.alpha, step.epsilon)?;
                sum.curve.extend(rows);
            }
        }
    }
    Ok(sum)
}
