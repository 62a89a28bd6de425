//! Three-player misère Nim: FARL vs no-FARL against Max-N and MCTS.
//!
//! `cargo run --release --example nim3p_ablation [runs] [episodes]`

use ntuple_farl::harness::{run_ablation, ExperimentConfig};
use ntuple_farl::opponents::{MctsConfig, OpponentSpec};
use ntuple_farl::GameSpec;

fn main() -> ntuple_farl::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let runs = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let episodes = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(50_000);

    let mut cfg = ExperimentConfig::for_game(GameSpec::nim3p(3, 5));
    cfg.runs = runs;
    cfg.params.train_episodes = episodes;
    cfg.opponents = vec![OpponentSpec::MaxN { depth: 15 }, OpponentSpec::Mcts(MctsConfig::new(5000))];
    cfg.eval_episodes = 300;
    print!("{}", run_ablation(&cfg)?.table());
    Ok(())
}
