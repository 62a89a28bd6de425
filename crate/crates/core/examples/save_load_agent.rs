//! Trains a small Nim agent, writes it in the binary agent format, loads it
//! back and checks that both copies play identically.
//!
//! `cargo run --release --example save_load_agent`

use ntuple_farl::game::rng_from_seed;
use ntuple_farl::harness::{evaluate, inspect_summary, load_agent, train_agent, ExperimentConfig};
use ntuple_farl::opponents::OpponentSpec;
use ntuple_farl::GameSpec;

fn main() -> ntuple_farl::Result<()> {
    let mut cfg = ExperimentConfig::for_game(GameSpec::nim(3, 5));
    cfg.params.train_episodes = 5000;
    let trained = train_agent(&cfg, 5, true)?;

    let path = std::env::temp_dir().join("ntfarl_example_nim.ntnf");
    let mut net = trained.net.clone();
    net.set_meta(trained.meta.to_meta_string());
    net.save(&path)?;
    let loaded = load_agent(&path)?;
    print!("{}", inspect_summary(&loaded.agent.net));

    let opponent = OpponentSpec::MaxN { depth: 15 };
    let a = evaluate(&loaded.game, &mut trained.greedy(), &opponent, 100, &mut rng_from_seed(9))?;
    let b = evaluate(&loaded.game, &mut loaded.agent.clone(), &opponent, 100, &mut rng_from_seed(9))?;
    println!("in memory {:.3}, reloaded {:.3}", a.overall.mean, b.overall.mean);
    assert_eq!(a.overall.mean, b.overall.mean);
    std::fs::remove_file(&path)?;
    Ok(())
}
