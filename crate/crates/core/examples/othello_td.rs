//! Othello with a random-walk tuple layout: a short TD-FARL run scored
//! against random play and a shallow Max-N searcher.
//!
//! `cargo run --release --example othello_td [episodes]`

use ntuple_farl::game::rng_from_seed;
use ntuple_farl::harness::{evaluate, train_agent, ExperimentConfig};
use ntuple_farl::opponents::OpponentSpec;
use ntuple_farl::{new_game, GameSpec};

fn main() -> ntuple_farl::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5000);
    let mut cfg = ExperimentConfig::for_game(GameSpec::othello());
    cfg.params.train_episodes = episodes;
    let trained = train_agent(&cfg, 4, true)?;
    println!("{} tuples, {} weights", trained.net.num_tuples(), trained.net.weights().len());
    let game = new_game(&cfg.game)?;
    let mut rng = rng_from_seed(4);
    for opp in [OpponentSpec::Random, OpponentSpec::MaxN { depth: 2 }] {
        let e = evaluate(&game, &mut trained.greedy(), &opp, 50, &mut rng)?;
        println!("vs {:<8} {:.3} ± {:.3}", opp.to_string(), e.overall.mean, e.overall.sd);
    }
    Ok(())
}
