//! Per-player action-value learners on TicTacToe: Q-learning, SARSA and
//! SARSA-FARL side by side, each scored against perfect play.
//!
//! `cargo run --release --example sarsa_tictactoe [episodes]`

use ntuple_farl::agents::Algorithm;
use ntuple_farl::game::rng_from_seed;
use ntuple_farl::harness::{evaluate, train_agent, ExperimentConfig};
use ntuple_farl::opponents::OpponentSpec;
use ntuple_farl::{new_game, GameSpec};

fn main() -> ntuple_farl::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(30_000);
    let game = new_game(&GameSpec::tictactoe())?;
    for algorithm in [Algorithm::QLearn, Algorithm::Sarsa, Algorithm::SarsaFarl] {
        let mut cfg = ExperimentConfig::for_game(GameSpec::tictactoe());
        cfg.algorithm = algorithm;
        cfg.params.train_episodes = episodes;
        let trained = train_agent(&cfg, 7, algorithm == Algorithm::SarsaFarl)?;
        let mut rng = rng_from_seed(7);
        let e = evaluate(&game, &mut trained.greedy(), &OpponentSpec::MaxN { depth: 10 }, 200, &mut rng)?;
        println!("{:<11} vs maxn:10  {:.3} ± {:.3}", algorithm.to_string(), e.overall.mean, e.overall.sd);
    }
    Ok(())
}
