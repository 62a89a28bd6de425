use std::collections::HashSet;

use proptest::prelude::*;
use rand::Rng;

use ntuple_farl::agents::argmax_random_tie;
use ntuple_farl::game::rng_from_seed;
use ntuple_farl::harness::ExperimentConfig;
use ntuple_farl::ntuple::{NTupleDef, NTupleNetwork, Sigma, TclConfig};
use ntuple_farl::opponents::{MctsConfig, OpponentSpec};
use ntuple_farl::{new_game, Game, GameSpec};

fn any_spec() -> impl Strategy<Value = GameSpec> {
    prop_oneof![
        Just(GameSpec::tictactoe()),
        (1u8..=4, 1u8..=6).prop_map(|(h, s)| GameSpec::nim(h, s)),
        (1u8..=4, 1u8..=6).prop_map(|(h, s)| GameSpec::nim3p(h, s)),
        Just(GameSpec::connect_four()),
        (2u8..=8).prop_map(GameSpec::hex),
        Just(GameSpec::othello()),
        Just(GameSpec::g2048()),
    ]
}

fn any_opponent() -> impl Strategy<Value = OpponentSpec> {
    prop_oneof![
        Just(OpponentSpec::Random),
        (1usize..30).prop_map(|depth| OpponentSpec::MaxN { depth }),
        (1usize..20_000, prop::option::of((0u32..400, prop::option::of(1usize..500)))).prop_map(|(it, extra)| {
            let mut c = MctsConfig::new(it);
            if let Some((c100, cap)) = extra {
                c.c = c100 as f64 / 100.0;
                c.rollout_cap = cap;
            }
            OpponentSpec::Mcts(c)
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Distinct boards over the tuple's cells give distinct in-range indices.
    #[test]
    fn lut_index_is_a_bijection(p in 2usize..6, n in 1usize..5, seed in any::<u64>()) {
        let num_cells = 8;
        let mut rng = rng_from_seed(seed);
        let mut cells: Vec<usize> = (0..num_cells).collect();
        rand::seq::SliceRandom::shuffle(cells.as_mut_slice(), &mut rng);
        cells.truncate(n);
        let t = NTupleDef::new(cells.clone(), p, num_cells).unwrap();
        let mut seen = HashSet::new();
        for code in 0..p.pow(n as u32) {
            let mut board = vec![0u8; num_cells];
            let mut c = code;
            for &cell in &cells {
                board[cell] = (c % p) as u8;
                c /= p;
            }
            for other in (0..num_cells).filter(|x| !cells.contains(x)) {
                board[other] = rng.gen_range(0..p) as u8;
            }
            let idx = t.lut_index(&board).unwrap();
            prop_assert!(idx < t.lut_len());
            prop_assert_eq!(idx, code);
            seen.insert(idx);
        }
        prop_assert_eq!(seen.len(), t.lut_len());
        let mut bad = vec![0u8; num_cells];
        bad[cells[0]] = p as u8;
        prop_assert!(t.lut_index(&bad).is_err());
    }

    /// Random play keeps cells in the alphabet, always has a legal move and ends
    /// with consistent final scores.
    #[test]
    fn random_playouts_are_consistent(spec in any_spec(), seed in any::<u64>()) {
        let game = new_game(&spec).unwrap();
        let mut rng = rng_from_seed(seed);
        let mut s = game.initial_state(&mut rng);
        let mut total = vec![0.0; game.num_players()];
        let mut plies = 0;
        while !s.terminal {
            prop_assert!(s.cells.iter().all(|&c| (c as usize) < game.cell_alphabet()));
            let acts = game.legal_actions(&s).unwrap();
            prop_assert!(!acts.is_empty());
            let a = acts[rng.gen_range(0..acts.len())];
            let tr = game.make_action(&s, a, true, &mut rng).unwrap();
            for (t, r) in total.iter_mut().zip(tr.rewards.as_slice()) {
                *t += r;
            }
            s = tr.next_state;
            plies += 1;
            prop_assert!(plies < 100_000);
        }
        prop_assert!(game.legal_actions(&s).map_or(true, |a| a.is_empty()));
        for (p, t) in total.iter().enumerate() {
            prop_assert!((t - s.scores.as_slice()[p]).abs() < 1e-9, "player {} got {} vs score {}", p, t, s.scores.as_slice()[p]);
        }
        match game.num_players() {
            2 => prop_assert!((s.scores.iter().sum::<f64>() - 1.0).abs() < 1e-12),
            3 => prop_assert!((s.scores.iter().sum::<f64>() - 1.2).abs() < 1e-12),
            _ => {}
        }
    }

    #[test]
    fn game_spec_round_trips(spec in any_spec()) {
        prop_assert_eq!(spec.to_string().parse::<GameSpec>().unwrap(), spec);
    }

    #[test]
    fn opponent_spec_round_trips(op in any_opponent()) {
        prop_assert_eq!(op.to_string().parse::<OpponentSpec>().unwrap(), op);
    }

    #[test]
    fn config_text_round_trips(
        spec in any_spec(),
        alpha in 0.0f64..1.0,
        lambda in 0.0f64..1.0,
        farl in any::<bool>(),
        opponents in prop::collection::vec(any_opponent(), 1..4),
        episodes in 1usize..1_000_000,
    ) {
        let mut cfg = ExperimentConfig::for_game(spec);
        cfg.params.alpha_start = alpha;
        cfg.params.lambda = lambda;
        cfg.params.farl_enabled = farl;
        cfg.params.train_episodes = episodes;
        cfg.opponents = opponents;
        let back = ExperimentConfig::parse(&cfg.to_text()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    /// Any weights and TCL state survive the binary format bit for bit.
    #[test]
    fn network_bytes_round_trip(
        n_tuples in 1usize..4,
        len in 1usize..5,
        action_net in any::<bool>(),
        sym in any::<bool>(),
        tcl in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let g = new_game(&GameSpec::tictactoe()).unwrap();
        let mut rng = rng_from_seed(seed);
        let tuples: Vec<Vec<usize>> = (0..n_tuples)
            .map(|_| {
                let mut c: Vec<usize> = (0..9).collect();
                rand::seq::SliceRandom::shuffle(c.as_mut_slice(), &mut rng);
                c.truncate(len);
                c
            })
            .collect();
        let sigma = if action_net { Sigma::Tanh } else { Sigma::Identity };
        let tcl = tcl.then(|| TclConfig::exp(2.7));
        let mut net = NTupleNetwork::for_game(&g, tuples, action_net, sigma, sym, tcl).unwrap();
        for w in net.weights_mut() {
            *w = rng.gen_range(-3.0..3.0);
        }
        let back = NTupleNetwork::from_bytes(&net.to_bytes()).unwrap();
        prop_assert!(back == net);
        prop_assert_eq!(back.to_bytes(), net.to_bytes());
    }

    /// The chosen index always holds the maximum.
    #[test]
    fn argmax_picks_a_maximiser(
        scores in prop::collection::vec(prop_oneof![Just(0.5f64), Just(1.0), -2.0f64..2.0], 1..12),
        seed in any::<u64>(),
    ) {
        let mut rng = rng_from_seed(seed);
        let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for _ in 0..8 {
            let i = argmax_random_tie(&scores, &mut rng);
            prop_assert_eq!(scores[i], best);
        }
    }
}
