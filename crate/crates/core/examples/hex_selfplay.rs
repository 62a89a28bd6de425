//! Self-play TD-FARL on a small Hex board, with the learning curve against
//! random play printed as it trains.
//!
//! `cargo run --release --example hex_selfplay [side] [episodes]`

use ntuple_farl::harness::{train_agent, ExperimentConfig};
use ntuple_farl::opponents::OpponentSpec;
use ntuple_farl::GameSpec;

fn main() -> ntuple_farl::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let side = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let episodes = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let mut cfg = ExperimentConfig::for_game(GameSpec::hex(side));
    cfg.params.train_episodes = episodes;
    cfg.params.num_eval = episodes / 10;
    cfg.curve_opponent = Some(OpponentSpec::Random);
    cfg.curve_episodes = 100;
    let trained = train_agent(&cfg, 2, true)?;
    for point in &trained.summary.curve {
        println!("{:>7}  score {:.3}  active {:.3}", point.episode, point.score_mean, point.active_weight_fraction);
    }
    Ok(())
}
