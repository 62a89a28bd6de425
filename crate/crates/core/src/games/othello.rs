use crate::game::{ActionId, Game, GameRng, GameState, Symmetry};
use crate::games::geometry::{dihedral_destinations, king_neighbors};

const N: usize = 8;
const DIRS: [(isize, isize); 8] = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)];

/// Othello 8x8. Value 1 is black (player 0, moves first), 2 is white.
///
/// A player without a legal move passes automatically: the afterstate names
/// the player who actually moves next. The game ends when neither can move.
#[derive(Clone, Copy, Debug, Default)]
pub struct Othello;

impl Othello {
    fn flips_in_dir(cells: &[u8], cell: usize, me: u8, (dr, dc): (isize, isize)) -> usize {
        let opp = 3 - me;
        let (mut r, mut c) = ((cell / N) as isize + dr, (cell % N) as isize + dc);
        let mut n = 0;
        while r >= 0 && c >= 0 && r < N as isize && c < N as isize {
            let v = cells[r as usize * N + c as usize];
            if v == opp {
                n += 1;
            } else if v == me {
                return n;
            } else {
                return 0;
            }
            r += dr;
            c += dc;
        }
        0
    }

    fn is_move(cells: &[u8], cell: usize, me: u8) -> bool {
        cells[cell] == 0 && DIRS.iter().any(|&d| Self::flips_in_dir(cells, cell, me, d) > 0)
    }

    fn has_move(cells: &[u8], player: usize) -> bool {
        (0..N * N).any(|i| Self::is_move(cells, i, player as u8 + 1))
    }

    pub fn disc_counts(cells: &[u8]) -> (usize, usize) {
        (cells.iter().filter(|&&c| c == 1).count(), cells.iter().filter(|&&c| c == 2).count())
    }

    /// All positions reached after `plies` moves from the standard opening,
    /// one per move sequence (transpositions are kept).
    pub fn start_positions(&self, plies: usize) -> Vec<GameState> {
        let mut frontier = vec![self.opening()];
        for _ in 0..plies {
            let mut next = Vec::new();
            let mut acts = Vec::new();
            for s in &frontier {
                if s.terminal {
                    continue;
                }
                acts.clear();
                self.legal_actions_into(s, &mut acts);
                next.extend(acts.iter().map(|&a| self.compute_afterstate(s, a)));
            }
            frontier = next;
        }
        frontier
    }

    fn opening(&self) -> GameState {
        let mut cells = [0u8; N * N];
        cells[3 * N + 3] = 2;
        cells[4 * N + 4] = 2;
        cells[3 * N + 4] = 1;
        cells[4 * N + 3] = 1;
        GameState::new(&cells, 0)
    }
}

impl Game for Othello {
    fn name(&self) -> String {
        "othello".into()
    }
    fn num_players(&self) -> usize {
        2
    }
    fn num_cells(&self) -> usize {
        N * N
    }
    fn cell_alphabet(&self) -> usize {
        3
    }
    fn num_actions(&self) -> usize {
        N * N
    }

    fn initial_state(&self, _rng: &mut GameRng) -> GameState {
        self.opening()
    }

    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>) {
        let me = s.player_to_move + 1;
        out.extend((0..N * N).filter(|&i| Self::is_move(&s.cells, i, me)).map(|i| ActionId(i as u16)));
    }

    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        a.index() < N * N && Self::is_move(&s.cells, a.index(), s.player_to_move + 1)
    }

    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState {
        let p = s.player();
        let me = p as u8 + 1;
        let cell = a.index();
        let mut n = *s;
        for d in DIRS {
            let k = Self::flips_in_dir(&s.cells, cell, me, d);
            let (mut r, mut c) = ((cell / N) as isize, (cell % N) as isize);
            for _ in 0..k {
                r += d.0;
                c += d.1;
                n.cells[r as usize * N + c as usize] = me;
            }
        }
        n.cells[cell] = me;
        n.move_counter += 1;
        let opp = 1 - p;
        if Self::has_move(&n.cells, opp) {
            n.player_to_move = opp as u8;
        } else if Self::has_move(&n.cells, p) {
            n.player_to_move = p as u8;
        } else {
            n.terminal = true;
            n.player_to_move = opp as u8;
            let (b, w) = Self::disc_counts(&n.cells);
            let (s0, s1) = match b.cmp(&w) {
                std::cmp::Ordering::Greater => (1.0, 0.0),
                std::cmp::Ordering::Less => (0.0, 1.0),
                std::cmp::Ordering::Equal => (0.5, 0.5),
            };
            n.scores[0] = s0;
            n.scores[1] = s1;
        }
        n
    }

    fn symmetries(&self) -> Vec<Symmetry> {
        dihedral_destinations(N)
            .into_iter()
            .map(|d| {
                let amap = d.iter().map(|&x| x as u16).collect();
                Symmetry::from_destinations(&d, amap)
            })
            .collect()
    }

    fn cell_neighbors(&self, cell: usize) -> Vec<usize> {
        king_neighbors(N, N, cell)
    }

    fn render(&self, s: &GameState) -> String {
        let mut out = String::from("  abcdefgh\n");
        for r in 0..N {
            out.push_str(&format!("{} ", r + 1));
            for c in 0..N {
                out.push(['.', 'X', 'O'][s.cells[r * N + c] as usize]);
            }
            out.push('\n');
        }
        out
    }

    fn action_label(&self, a: ActionId) -> String {
        let (r, c) = (a.index() / N, a.index() % N);
        format!("{}{}", (b'a' + c as u8) as char, r + 1)
    }

    /// Accepts `d3` style coordinates or a raw cell index.
    fn parse_action(&self, text: &str) -> Option<ActionId> {
        let t = text.trim();
        let b = t.as_bytes();
        if b.len() == 2 && b[0].is_ascii_alphabetic() && b[1].is_ascii_digit() {
            let c = (b[0].to_ascii_lowercase() - b'a') as usize;
            let r = (b[1] - b'1') as usize;
            return (r < N && c < N).then(|| ActionId((r * N + c) as u16));
        }
        t.parse::<u16>().ok().filter(|&a| (a as usize) < N * N).map(ActionId)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;

    #[test]
    fn opening_has_four_moves() {
        let g = Othello;
        let s = g.initial_state(&mut rng_from_seed(0));
        assert_eq!(g.legal_actions(&s).unwrap().len(), 4);
    }

    #[test]
    fn four_ply_sequences_number_244() {
        assert_eq!(Othello.start_positions(4).len(), 244);
    }

    #[test]
    fn move_flips_discs() {
        let g = Othello;
        let s = g.initial_state(&mut rng_from_seed(0));
        // d3 (row 2, col 3) flips d4.
        let a = g.parse_action("d3").unwrap();
        let n = g.compute_afterstate(&s, a);
        assert_eq!(Othello::disc_counts(&n.cells), (4, 1));
        assert_eq!(n.player_to_move, 1);
    }

    #[test]
    fn pass_returns_move_to_mover() {
        // Black at a1, white at b1; black plays c1 capturing b1, white has no
        // disc left, so nobody can move: terminal.
        let mut cells = [0u8; 64];
        cells[0] = 1;
        cells[1] = 2;
        let s = GameState::new(&cells, 0);
        let n = Othello.compute_afterstate(&s, ActionId(2));
        assert!(n.terminal);
        assert_eq!(n.scores[0], 1.0);

        // White to move cannot move, black can: black keeps the move.
        let mut cells = [0u8; 64];
        cells[0] = 1;
        cells[1] = 2;
        cells[9] = 2;
        let s = GameState::new(&cells, 0);
        // Black plays c1 capturing b1; white's b2 has no flanking line.
        let n = Othello.compute_afterstate(&s, ActionId(2));
        assert!(!n.terminal);
        assert!(!Othello::has_move(&n.cells, 1));
        assert_eq!(n.player_to_move, 0);
    }
}
