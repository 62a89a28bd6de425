//! Single-player 2048: a TD-FARL agent with a small row/column layout
//! compared with uniform random play.
//!
//! `cargo run --release --example g2048_training [episodes]`

use ntuple_farl::harness::{evaluate, train_agent, ExperimentConfig};
use ntuple_farl::ntuple::TupleLayout;
use ntuple_farl::opponents::{OpponentSpec, RandomPlayer};
use ntuple_farl::{game::rng_from_seed, new_game, GameSpec};

fn main() -> ntuple_farl::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(2000);
    let mut cfg = ExperimentConfig::for_game(GameSpec::g2048());
    // Rows and columns keep the net small (8 x 16^4 weights).
    let rows = (0..4).map(|r| (0..4).map(|c| 4 * r + c).collect());
    let cols = (0..4).map(|c| (0..4).map(|r| 4 * r + c).collect());
    cfg.layout = TupleLayout::Explicit(rows.chain(cols).collect());
    cfg.params.train_episodes = episodes;
    cfg.params.tcl = None;

    let game = new_game(&cfg.game)?;
    let mut rng = rng_from_seed(1);
    let random = evaluate(&game, &mut RandomPlayer, &OpponentSpec::Random, 200, &mut rng)?;
    let trained = train_agent(&cfg, 1, true)?;
    let agent = evaluate(&game, &mut trained.greedy(), &OpponentSpec::Random, 100, &mut rng)?;
    println!("random play  {:>9.1} ± {:.1}", random.overall.mean, random.overall.sd);
    println!("agent        {:>9.1} ± {:.1}", agent.overall.mean, agent.overall.sd);
    Ok(())
}
