//! Self-play learners over n-tuple networks: parameters, ε-greedy action
//! selection, the episode drivers and the training loop.

mod episode;
mod params;
mod policy;
mod train;

pub use episode::{
    per_player_q_episode, reward_scale, run_episode, sarsa_farl_episode, start_state, td_farl_episode,
    td_plain_episode, EpisodeContext, EpisodeStats, StepParams, UpdateEvent, UpdateKind,
};
pub use params::{AgentParams, Algorithm};
pub use policy::{
    action_scores, afterstate_scores, argmax_random_tie, choose_action_q, choose_action_td, GreedyAgent,
};
pub use train::{build_network, train, write_curve_csv, Checkpoint, CurvePoint, TrainSummary, CURVE_HEADER};
