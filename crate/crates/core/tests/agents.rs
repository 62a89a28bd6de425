use rand::Rng;

use ntuple_farl::agents::{
    build_network, per_player_q_episode, td_farl_episode, train, AgentParams, Algorithm, GreedyAgent, StepParams,
    UpdateEvent, UpdateKind,
};
use ntuple_farl::game::rng_from_seed;
use ntuple_farl::games::{Nim, TicTacToe};
use ntuple_farl::harness::{evaluate, train_agent, ExperimentConfig};
use ntuple_farl::ntuple::{NTupleNetwork, TupleLayout};
use ntuple_farl::opponents::OpponentSpec;
use ntuple_farl::{new_game, Game, GameKind, GameSpec};

fn randomized_q_net<G: Game>(game: &G, params: &AgentParams, seed: u64) -> NTupleNetwork {
    let mut rng = rng_from_seed(seed);
    let layout = TupleLayout::Random { count: 2, len: game.num_cells().min(4) };
    let mut net = build_network(game, Algorithm::QLearn, params, &layout, &mut rng).unwrap();
    for w in net.weights_mut() {
        *w = rng.gen_range(-0.5..0.5);
    }
    net
}

/// Without exploration SARSA's next action is the greedy one, so its
/// bootstrap equals Q-learning's max and both runs stay bit-identical.
fn sarsa_matches_q_without_exploration<G: Game>(game: &G, kind: GameKind) {
    let mut params = AgentParams::preset(kind);
    params.epsilon_start = 0.0;
    params.epsilon_final = 0.0;
    params.use_symmetry = false;
    let mut q = randomized_q_net(game, &params, 1);
    let mut sarsa = q.clone();
    let step = StepParams { alpha: 0.3, epsilon: 0.0 };
    for ep in 0..40u64 {
        let (mut ra, mut rb) = (rng_from_seed(ep), rng_from_seed(ep));
        let start_a = game.initial_state(&mut ra);
        let start_b = game.initial_state(&mut rb);
        let (mut la, mut lb): (Vec<UpdateEvent>, Vec<UpdateEvent>) = (Vec::new(), Vec::new());
        per_player_q_episode(false, game, &mut q, &params, step, start_a, &mut ra, Some(&mut la)).unwrap();
        per_player_q_episode(true, game, &mut sarsa, &params, step, start_b, &mut rb, Some(&mut lb)).unwrap();
        assert_eq!(la, lb, "episode {ep}");
    }
    assert_eq!(q.weights(), sarsa.weights());
}

#[test]
fn sarsa_equals_q_learning_on_tictactoe() {
    sarsa_matches_q_without_exploration(&TicTacToe, GameKind::TicTacToe);
}

#[test]
fn sarsa_equals_q_learning_on_nim3p() {
    sarsa_matches_q_without_exploration(&Nim::new(3, 5, 3), GameKind::Nim3P);
}

#[test]
fn evaluation_leaves_weights_alone() {
    let mut cfg = ExperimentConfig::for_game(GameSpec::tictactoe());
    cfg.params.train_episodes = 500;
    let trained = train_agent(&cfg, 3, true).unwrap();
    let before = trained.net.weight_checksum();
    let mut agent = trained.greedy();
    let game = new_game(&cfg.game).unwrap();
    let mut rng = rng_from_seed(9);
    evaluate(&game, &mut agent, &OpponentSpec::Random, 100, &mut rng).unwrap();
    evaluate(&game, &mut agent, &OpponentSpec::MaxN { depth: 3 }, 20, &mut rng).unwrap();
    assert_eq!(agent.net.weight_checksum(), before);
    assert_eq!(agent.net, trained.net);
}

#[test]
fn training_is_reproducible_per_seed() {
    let mut cfg = ExperimentConfig::for_game(GameSpec::nim(3, 5));
    cfg.params.train_episodes = 400;
    let a = train_agent(&cfg, 11, true).unwrap();
    let b = train_agent(&cfg, 11, true).unwrap();
    let c = train_agent(&cfg, 12, true).unwrap();
    assert_eq!(a.net, b.net);
    assert_eq!(a.summary.moves, b.summary.moves);
    assert_ne!(a.net.weight_checksum(), c.net.weight_checksum());
}

/// One greedy TicTacToe episode: every move after each player's first
/// updates that player's previous afterstate, then the non-final player
/// adapts towards its terminal reward and the final afterstate towards 0.
#[test]
fn td_farl_event_structure() {
    let g = TicTacToe;
    let mut params = AgentParams::preset(GameKind::TicTacToe);
    params.epsilon_start = 0.0;
    params.epsilon_final = 0.0;
    let mut rng = rng_from_seed(21);
    let mut net = build_network(&g, Algorithm::TdFarl, &params, &TupleLayout::Random { count: 1, len: 9 }, &mut rng).unwrap();
    for ep in 0..30 {
        let mut log = Vec::new();
        let start = g.initial_state(&mut rng);
        let stats =
            td_farl_episode(&g, &mut net, &params, StepParams { alpha: 0.5, epsilon: 0.0 }, start, &mut rng, Some(&mut log)).unwrap();
        let steps = log.iter().filter(|e| e.kind == UpdateKind::Step).count();
        assert_eq!(steps, stats.moves - 2, "episode {ep}");
        let tail: Vec<_> = log.iter().skip(steps).collect();
        assert_eq!(tail.len(), 2);
        assert_eq!(tail[0].kind, UpdateKind::FinalOther);
        assert_eq!(tail[1].kind, UpdateKind::FinalTerminal);
        assert_eq!(tail[1].target, 0.0);
        let last = (stats.moves - 1) % 2;
        assert_eq!(tail[1].player, last);
        assert_eq!(tail[0].player, 1 - last);
        assert_eq!(tail[0].target, stats.final_state.scores[1 - last]);
        assert_eq!(tail[1].cells, stats.final_state.cells.to_vec());
        assert!(log.iter().all(|e| e.applied));
    }
}

#[test]
fn td_farl_without_farl_has_no_final_updates() {
    let g = TicTacToe;
    let mut params = AgentParams::preset(GameKind::TicTacToe);
    params.farl_enabled = false;
    let mut rng = rng_from_seed(22);
    let mut net = build_network(&g, Algorithm::TdFarl, &params, &TupleLayout::Random { count: 1, len: 9 }, &mut rng).unwrap();
    let mut log = Vec::new();
    for _ in 0..20 {
        let start = g.initial_state(&mut rng);
        td_farl_episode(&g, &mut net, &params, StepParams { alpha: 0.5, epsilon: 0.1 }, start, &mut rng, Some(&mut log)).unwrap();
    }
    assert!(log.iter().all(|e| e.kind == UpdateKind::Step));
}

/// Exploration moves are counted and, with learn-from-RM off, their
/// updates are logged as skipped.
#[test]
fn random_moves_skip_updates_without_learn_from_rm() {
    let g = TicTacToe;
    let mut params = AgentParams::preset(GameKind::TicTacToe);
    params.learn_from_rm = false;
    let mut rng = rng_from_seed(23);
    let mut net = build_network(&g, Algorithm::TdFarl, &params, &TupleLayout::Random { count: 1, len: 9 }, &mut rng).unwrap();
    let (mut skipped, mut random) = (0, 0);
    for _ in 0..200 {
        let mut log = Vec::new();
        let start = g.initial_state(&mut rng);
        let st = td_farl_episode(&g, &mut net, &params, StepParams { alpha: 0.5, epsilon: 0.5 }, start, &mut rng, Some(&mut log)).unwrap();
        assert_eq!(st.skipped_updates, log.iter().filter(|e| !e.applied).count());
        skipped += st.skipped_updates;
        random += st.random_moves;
    }
    assert!(random > 0 && skipped > 0);
}

/// A greedy agent picks an immediately winning move when the net is empty
/// (every afterstate is worth 0, the win scores its reward).
#[test]
fn greedy_agent_takes_immediate_win() {
    let g = TicTacToe;
    let params = AgentParams::preset(GameKind::TicTacToe);
    let mut rng = rng_from_seed(24);
    let net = build_network(&g, Algorithm::TdFarl, &params, &TupleLayout::Random { count: 1, len: 9 }, &mut rng).unwrap();
    let agent = GreedyAgent::new(net);
    let s = g.state_from_str("XX.OO....");
    for _ in 0..20 {
        assert_eq!(agent.choose(&g, &s, &mut rng).unwrap().0, 2);
    }
}

#[test]
fn train_reports_checkpoints_in_order() {
    let g = Nim::new(3, 5, 2);
    let mut params = AgentParams::preset(GameKind::Nim);
    params.train_episodes = 300;
    params.num_eval = 100;
    let mut rng = rng_from_seed(25);
    let mut net = build_network(&g, Algorithm::TdFarl, &params, &TupleLayout::AllCells { copies: 1 }, &mut rng).unwrap();
    let mut seen = Vec::new();
    let mut cb = |e: usize, _: &NTupleNetwork, _: f64, _: f64| {
        seen.push(e);
        Ok(Vec::new())
    };
    let summary = train(&g, &mut net, Algorithm::TdFarl, &params, &mut rng, Some(&mut cb)).unwrap();
    assert_eq!(seen, vec![100, 200, 300]);
    assert_eq!(summary.episodes, 300);
}
