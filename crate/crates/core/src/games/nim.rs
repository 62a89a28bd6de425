use itertools::Itertools;

use crate::game::{ActionId, Game, GameRng, GameState, Symmetry};

/// Misère Nim with `heaps` heaps of `stones` stones: whoever takes the last
/// piece loses.
///
/// With two players the loser scores 0 and the winner 1. With three players
/// the mover who empties the board scores 0, the successor 1 and the
/// predecessor 0.2.
///
/// Each heap is one cell (alphabet `stones + 1`). Action `heap * stones +
/// (count - 1)` takes `count` stones from `heap`.
#[derive(Clone, Copy, Debug)]
pub struct Nim {
    heaps: usize,
    stones: usize,
    players: usize,
}

pub const NIM3P_PREDECESSOR_REWARD: f64 = 0.2;

impl Nim {
    pub fn new(heaps: usize, stones: usize, players: usize) -> Self {
        assert!(heaps >= 1 && stones >= 1 && (players == 2 || players == 3));
        Nim { heaps, stones, players }
    }

    pub fn heaps(&self) -> usize {
        self.heaps
    }

    pub fn stones(&self) -> usize {
        self.stones
    }

    pub fn encode(&self, heap: usize, count: usize) -> ActionId {
        debug_assert!(heap < self.heaps && count >= 1 && count <= self.stones);
        ActionId((heap * self.stones + count - 1) as u16)
    }

    pub fn decode(&self, a: ActionId) -> (usize, usize) {
        (a.index() / self.stones, a.index() % self.stones + 1)
    }

    pub fn state_from_heaps(&self, heaps: &[u8], player: u8) -> GameState {
        assert_eq!(heaps.len(), self.heaps);
        let mut s = GameState::new(heaps, player);
        if heaps.iter().all(|&h| h == 0) {
            s.terminal = true;
        }
        s
    }
}

impl Game for Nim {
    fn name(&self) -> String {
        let base = if self.players == 3 { "nim3p" } else { "nim" };
        format!("{base}:{}x{}", self.heaps, self.stones)
    }
    fn num_players(&self) -> usize {
        self.players
    }
    fn num_cells(&self) -> usize {
        self.heaps
    }
    fn cell_alphabet(&self) -> usize {
        self.stones + 1
    }
    fn num_actions(&self) -> usize {
        self.heaps * self.stones
    }

    fn initial_state(&self, _rng: &mut GameRng) -> GameState {
        GameState::new(&vec![self.stones as u8; self.heaps], 0)
    }

    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>) {
        for (h, &size) in s.cells.iter().enumerate() {
            for c in 1..=size as usize {
                out.push(self.encode(h, c));
            }
        }
    }

    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        let (h, c) = self.decode(a);
        h < self.heaps && c <= s.cells[h] as usize
    }

    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState {
        let (h, c) = self.decode(a);
        let mut n = *s;
        n.cells[h] -= c as u8;
        n.move_counter += 1;
        let p = s.player();
        n.player_to_move = ((p + 1) % self.players) as u8;
        if n.cells.iter().all(|&x| x == 0) {
            n.terminal = true;
            if self.players == 2 {
                n.scores[p] = 0.0;
                n.scores[1 - p] = 1.0;
            } else {
                n.scores[p] = 0.0;
                n.scores[(p + 1) % 3] = 1.0;
                n.scores[(p + 2) % 3] = NIM3P_PREDECESSOR_REWARD;
            }
        }
        n
    }

    fn symmetries(&self) -> Vec<Symmetry> {
        (0..self.heaps)
            .permutations(self.heaps)
            .map(|perm| {
                let mut amap = vec![0u16; self.num_actions()];
                for h in 0..self.heaps {
                    for c in 1..=self.stones {
                        amap[self.encode(h, c).index()] = self.encode(perm[h], c).0;
                    }
                }
                Symmetry::from_destinations(&perm, amap)
            })
            .collect()
    }

    fn reward_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn cell_neighbors(&self, cell: usize) -> Vec<usize> {
        (0..self.heaps).filter(|&h| h != cell).collect()
    }

    fn render(&self, s: &GameState) -> String {
        let mut out = String::new();
        for (h, &size) in s.cells.iter().enumerate() {
            out.push_str(&format!("heap {h}: {}\n", "|".repeat(size as usize)));
        }
        out
    }

    fn render_line(&self, s: &GameState) -> String {
        let heaps = s.cells.iter().map(|h| h.to_string()).join(",");
        format!("({heaps}) {}", if s.terminal { "end".to_string() } else { format!("p{}", s.player_to_move) })
    }

    fn action_label(&self, a: ActionId) -> String {
        let (h, c) = self.decode(a);
        format!("{h}:{c}")
    }

    /// Accepts `heap:count` or `heap count`.
    fn parse_action(&self, text: &str) -> Option<ActionId> {
        let mut parts = text.split(|c: char| c == ':' || c.is_whitespace()).filter(|p| !p.is_empty());
        let h: usize = parts.next()?.parse().ok()?;
        let c: usize = parts.next()?.parse().ok()?;
        (h < self.heaps && c >= 1 && c <= self.stones).then(|| self.encode(h, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;

    #[test]
    fn forced_single_move() {
        let g = Nim::new(3, 5, 2);
        let s = g.state_from_heaps(&[0, 0, 1], 0);
        assert_eq!(g.legal_actions(&s).unwrap(), vec![g.encode(2, 1)]);
    }

    #[test]
    fn two_player_misere_terminal() {
        let g = Nim::new(3, 5, 2);
        let s = g.state_from_heaps(&[0, 0, 1], 0);
        let tr = g.make_action(&s, g.encode(2, 1), true, &mut rng_from_seed(0)).unwrap();
        assert!(tr.next_state.terminal);
        assert_eq!(tr.rewards.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn three_player_terminal_rewards() {
        let g = Nim::new(3, 5, 3);
        let s = g.state_from_heaps(&[0, 0, 1], 1);
        let tr = g.make_action(&s, g.encode(2, 1), true, &mut rng_from_seed(0)).unwrap();
        assert_eq!(tr.rewards.as_slice(), &[0.2, 0.0, 1.0]);
        assert!((tr.rewards.sum() - 1.2).abs() < 1e-12);
    }

    #[test]
    fn non_terminal_move_has_zero_reward() {
        let g = Nim::new(3, 5, 2);
        let s = g.state_from_heaps(&[2, 0, 0], 0);
        let tr = g.make_action(&s, g.encode(0, 1), true, &mut rng_from_seed(0)).unwrap();
        assert!(!tr.next_state.terminal);
        assert_eq!(tr.rewards.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn taking_from_empty_heap_fails() {
        let g = Nim::new(3, 5, 2);
        let s = g.state_from_heaps(&[0, 3, 0], 0);
        assert!(g.make_action(&s, g.encode(0, 1), true, &mut rng_from_seed(0)).is_err());
    }

    #[test]
    fn heap_permutations_give_six_orbit_states() {
        let g = Nim::new(3, 5, 2);
        let s = g.state_from_heaps(&[1, 2, 3], 0);
        assert_eq!(g.symmetric_states(&s, true).len(), 6);
        assert_eq!(g.symmetric_states(&s, false).len(), 1);
    }

    #[test]
    fn parse_round_trip() {
        let g = Nim::new(3, 5, 2);
        let a = g.encode(1, 4);
        assert_eq!(g.parse_action(&g.action_label(a)), Some(a));
        assert_eq!(g.parse_action("3:1"), None);
    }
}
