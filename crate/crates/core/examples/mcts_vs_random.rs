//! UCT search against uniform random play on Connect Four and Othello.
//!
//! `cargo run --release --example mcts_vs_random [iterations] [games]`

use ntuple_farl::game::rng_from_seed;
use ntuple_farl::harness::evaluate;
use ntuple_farl::opponents::{MctsConfig, MctsPlayer, OpponentSpec};
use ntuple_farl::{new_game, GameSpec};

fn main() -> ntuple_farl::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let iterations = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    let games = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(20);
    let mut rng = rng_from_seed(3);
    for spec in [GameSpec::connect_four(), GameSpec::othello()] {
        let game = new_game(&spec)?;
        let mut mcts = MctsPlayer { config: MctsConfig::new(iterations) };
        let e = evaluate(&game, &mut mcts, &OpponentSpec::Random, games, &mut rng)?;
        let roles: Vec<String> = e.roles.iter().map(|r| format!("{} {:.2}", r.role, r.mean)).collect();
        println!("{:<12} mcts:{iterations} vs random  {:.3}  ({})", spec.to_string(), e.overall.mean, roles.join(", "));
    }
    Ok(())
}
