//! FARL vs no-FARL on TicTacToe against perfect Max-N play.
//!
//! `cargo run --release --example tictactoe_farl [runs] [episodes]`

use ntuple_farl::harness::{run_ablation, ExperimentConfig};
use ntuple_farl::opponents::OpponentSpec;
use ntuple_farl::GameSpec;

fn main() -> ntuple_farl::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let runs = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    let episodes = args.get(2).and_then(|a| a.parse().ok());

    let mut cfg = ExperimentConfig::for_game(GameSpec::tictactoe());
    cfg.runs = runs;
    cfg.opponents = vec![OpponentSpec::MaxN { depth: 10 }, OpponentSpec::Random];
    cfg.eval_episodes = 200;
    cfg.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    if let Some(e) = episodes {
        cfg.params.train_episodes = e;
    }
    let report = run_ablation(&cfg)?;
    print!("{}", report.table());
    Ok(())
}
