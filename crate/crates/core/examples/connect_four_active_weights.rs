//! How many Connect Four weights get touched with and without FARL.
//!
//! `cargo run --release --example connect_four_active_weights [episodes]`

use ntuple_farl::harness::{train_agent, ExperimentConfig};
use ntuple_farl::GameSpec;

fn main() -> ntuple_farl::Result<()> {
    let episodes = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10_000);
    let mut cfg = ExperimentConfig::for_game(GameSpec::connect_four());
    cfg.params.train_episodes = episodes;
    for farl in [true, false] {
        let t = train_agent(&cfg, 6, farl)?;
        let total = t.net.weights().len();
        let active = t.net.touched_count();
        println!("farl={farl:<5} active {active}/{total} ({:.3}%)", 100.0 * active as f64 / total as f64);
    }
    Ok(())
}
