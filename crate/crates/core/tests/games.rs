use std::collections::HashSet;

use ntuple_farl::game::{rng_from_seed, StateKey};
use ntuple_farl::games::{game_oracle_value, ConnectFour, Game2048, Hex, Nim, Othello, TicTacToe, DEFAULT_ORACLE_BUDGET};
use ntuple_farl::{Game, GameState};

fn perft<G: Game>(game: &G, s: &GameState, depth: usize) -> u64 {
    if depth == 0 || s.terminal {
        return 1;
    }
    game.legal_actions(s).unwrap().into_iter().map(|a| perft(game, &game.compute_afterstate(s, a), depth - 1)).sum()
}

/// Leaf counts from the published move-generation tables.
#[test]
fn othello_perft() {
    let g = Othello;
    let s = g.initial_state(&mut rng_from_seed(0));
    let counts: Vec<u64> = (1..=6).map(|d| perft(&g, &s, d)).collect();
    assert_eq!(counts, vec![4, 12, 56, 244, 1396, 8200]);
}

/// Nobody can win before ply 7; the only restriction up to there is the
/// seven lines that fill one column with the first six plies.
#[test]
fn connect_four_perft() {
    let g = ConnectFour;
    let s = g.initial_state(&mut rng_from_seed(0));
    for d in 1..=6 {
        assert_eq!(perft(&g, &s, d), 7u64.pow(d as u32));
    }
    assert_eq!(perft(&g, &s, 7), 7u64.pow(7) - 7);
}

/// Exact outcome distribution of uniformly random TicTacToe play.
#[test]
fn tictactoe_random_play_outcomes() {
    fn walk(g: &TicTacToe, s: &GameState, p: f64, out: &mut [f64; 3]) {
        if s.terminal {
            let k = match (s.scores[0], s.scores[1]) {
                (a, b) if a > b => 0,
                (a, b) if a < b => 1,
                _ => 2,
            };
            out[k] += p;
            return;
        }
        let acts = g.legal_actions(s).unwrap();
        let q = p / acts.len() as f64;
        for a in acts {
            walk(g, &g.compute_afterstate(s, a), q, out);
        }
    }
    let g = TicTacToe;
    let mut out = [0.0; 3];
    walk(&g, &g.initial_state(&mut rng_from_seed(0)), 1.0, &mut out);
    assert!((out[0] - 0.584_920_634_920_635).abs() < 1e-12, "X wins {}", out[0]);
    assert!((out[1] - 0.288_095_238_095_238).abs() < 1e-12, "O wins {}", out[1]);
    assert!((out[2] - 0.126_984_126_984_127).abs() < 1e-12, "draw {}", out[2]);
}

/// Misère Nim theory: the mover wins iff some heap exceeds 1 and the
/// nim-sum is non-zero, or all heaps are at most 1 and their count is even.
#[test]
fn misere_nim_matches_theory_on_every_state() {
    let g = Nim::new(3, 5, 2);
    let mut checked = 0;
    for a in 0..=5u8 {
        for b in 0..=5u8 {
            for c in 0..=5u8 {
                if a + b + c == 0 {
                    continue;
                }
                let s = g.state_from_heaps(&[a, b, c], 0);
                let v = game_oracle_value(&g, &s, DEFAULT_ORACLE_BUDGET).unwrap();
                let big = [a, b, c].iter().any(|&h| h > 1);
                let mover_wins = if big { a ^ b ^ c != 0 } else { (a + b + c) % 2 == 0 };
                assert_eq!(v[0], if mover_wins { 1.0 } else { 0.0 }, "heaps {a},{b},{c}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 215);
}

/// Perfect three-player values always split 1.2 between the seats.
#[test]
fn nim3p_perfect_values_sum_to_1_2() {
    let g = Nim::new(3, 5, 3);
    for a in 0..=5u8 {
        for b in 0..=5u8 {
            for c in 1..=5u8 {
                for p in 0..3 {
                    let s = g.state_from_heaps(&[a, b, c], p);
                    let v = game_oracle_value(&g, &s, DEFAULT_ORACLE_BUDGET).unwrap();
                    assert!((v.sum() - 1.2).abs() < 1e-12);
                    assert!(v.as_slice().iter().all(|&x| x == 0.0 || x == 0.2 || x == 1.0));
                }
            }
        }
    }
}

/// Hex never draws: a full board always has exactly one winning chain.
#[test]
fn hex_full_boards_have_one_winner() {
    let mut rng = rng_from_seed(4);
    for side in [3, 5, 6] {
        let g = Hex::new(side);
        for _ in 0..200 {
            let mut s = g.initial_state(&mut rng);
            while !s.terminal {
                let acts = g.legal_actions(&s).unwrap();
                let a = acts[rand::Rng::gen_range(&mut rng, 0..acts.len())];
                s = g.make_action(&s, a, true, &mut rng).unwrap().next_state;
            }
            let w0 = g.has_chain(&s.cells, 0);
            let w1 = g.has_chain(&s.cells, 1);
            assert!(w0 != w1);
            assert_eq!(s.scores[0] + s.scores[1], 1.0);
            assert_eq!(s.scores[0] == 1.0, w0);
        }
    }
}

/// Tile mass is conserved by a slide and grows by the spawned tile.
#[test]
fn g2048_tile_mass() {
    let g = Game2048;
    let mass = |s: &GameState| -> u64 { s.cells.iter().map(|&e| if e == 0 { 0 } else { 1u64 << e }).sum() };
    let mut rng = rng_from_seed(48);
    for _ in 0..50 {
        let mut s = g.initial_state(&mut rng);
        let mut score = 0.0;
        while !s.terminal {
            let acts = g.legal_actions(&s).unwrap();
            let a = acts[rand::Rng::gen_range(&mut rng, 0..acts.len())];
            let tr = g.make_action(&s, a, true, &mut rng).unwrap();
            assert_eq!(mass(&tr.afterstate), mass(&s));
            let spawned = mass(&tr.next_state) - mass(&tr.afterstate);
            assert!(spawned == 2 || spawned == 4);
            score += tr.rewards[0];
            s = tr.next_state;
        }
        assert_eq!(score, s.scores[0]);
    }
}

/// Symmetric images of legal actions are legal in the symmetric state and
/// lead to the symmetric afterstate.
#[test]
fn symmetries_commute_with_moves() {
    let games: Vec<Box<dyn Game>> =
        vec![Box::new(TicTacToe), Box::new(ConnectFour), Box::new(Othello), Box::new(Hex::new(6)), Box::new(Nim::new(3, 5, 3))];
    let mut rng = rng_from_seed(5);
    for g in &games {
        for _ in 0..50 {
            let mut s = g.initial_state(&mut rng);
            while !s.terminal {
                let acts = g.legal_actions(&s).unwrap();
                for sym in g.symmetries() {
                    let ss = sym.apply(&s);
                    for &a in &acts {
                        let b = sym.apply_action(a);
                        assert!(g.is_legal(&ss, b), "{}: action {a} has no image", g.name());
                        assert_eq!(sym.apply(&g.compute_afterstate(&s, a)).cells, g.compute_afterstate(&ss, b).cells);
                    }
                }
                let a = acts[rand::Rng::gen_range(&mut rng, 0..acts.len())];
                s = g.make_action(&s, a, true, &mut rng).unwrap().next_state;
            }
        }
    }
}

/// Every TicTacToe position is reached by some move order; the count of
/// distinct reachable positions is the well-known 5478.
#[test]
fn tictactoe_reachable_positions() {
    let g = TicTacToe;
    let mut seen: HashSet<StateKey> = HashSet::new();
    let mut stack = vec![g.initial_state(&mut rng_from_seed(0))];
    while let Some(s) = stack.pop() {
        if !seen.insert(s.key()) || s.terminal {
            continue;
        }
        for a in g.legal_actions(&s).unwrap() {
            stack.push(g.compute_afterstate(&s, a));
        }
    }
    assert_eq!(seen.len(), 5478);
}
