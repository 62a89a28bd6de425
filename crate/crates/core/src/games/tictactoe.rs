use crate::game::{ActionId, Game, GameRng, GameState, Symmetry};
use crate::games::geometry::{dihedral_destinations, king_neighbors};

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

/// 3x3 TicTacToe. Cell values: 0 empty, 1 X (player 0), 2 O (player 1).
#[derive(Clone, Copy, Debug, Default)]
pub struct TicTacToe;

impl TicTacToe {
    /// Parses a 9-character board (`X`, `O`, anything else empty). The player
    /// to move is derived from the piece counts.
    pub fn state_from_str(&self, board: &str) -> GameState {
        let cells: Vec<u8> = board
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'X' | 'x' => 1,
                'O' | 'o' => 2,
                _ => 0,
            })
            .collect();
        assert_eq!(cells.len(), 9, "TicTacToe board needs 9 cells");
        let xs = cells.iter().filter(|&&c| c == 1).count();
        let os = cells.iter().filter(|&&c| c == 2).count();
        let mut s = GameState::new(&cells, if xs > os { 1 } else { 0 });
        s.move_counter = (xs + os) as u32;
        self.settle(&mut s);
        s
    }

    pub fn winner(cells: &[u8]) -> Option<u8> {
        LINES.iter().find_map(|l| {
            let v = cells[l[0]];
            (v != 0 && v == cells[l[1]] && v == cells[l[2]]).then(|| v - 1)
        })
    }

    fn settle(&self, s: &mut GameState) {
        if let Some(w) = Self::winner(&s.cells) {
            s.terminal = true;
            s.scores[w as usize] = 1.0;
            s.scores[1 - w as usize] = 0.0;
        } else if s.cells.iter().all(|&c| c != 0) {
            s.terminal = true;
            s.scores[0] = 0.5;
            s.scores[1] = 0.5;
        }
    }
}

impl Game for TicTacToe {
    fn name(&self) -> String {
        "tictactoe".into()
    }
    fn num_players(&self) -> usize {
        2
    }
    fn num_cells(&self) -> usize {
        9
    }
    fn cell_alphabet(&self) -> usize {
        3
    }
    fn num_actions(&self) -> usize {
        9
    }

    fn initial_state(&self, _rng: &mut GameRng) -> GameState {
        GameState::new(&[0; 9], 0)
    }

    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>) {
        out.extend(s.cells.iter().enumerate().filter(|(_, &c)| c == 0).map(|(i, _)| ActionId(i as u16)));
    }

    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        s.cells.get(a.index()) == Some(&0)
    }

    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState {
        let mut n = *s;
        let p = s.player_to_move;
        n.cells[a.index()] = p + 1;
        n.move_counter += 1;
        n.player_to_move = 1 - p;
        self.settle(&mut n);
        n
    }

    fn symmetries(&self) -> Vec<Symmetry> {
        dihedral_destinations(3)
            .into_iter()
            .map(|d| {
                let amap = d.iter().map(|&x| x as u16).collect();
                Symmetry::from_destinations(&d, amap)
            })
            .collect()
    }

    fn cell_neighbors(&self, cell: usize) -> Vec<usize> {
        king_neighbors(3, 3, cell)
    }

    fn render(&self, s: &GameState) -> String {
        let mut out = String::new();
        for r in 0..3 {
            for c in 0..3 {
                out.push(match s.cells[r * 3 + c] {
                    1 => 'X',
                    2 => 'O',
                    _ => '.',
                });
            }
            out.push('\n');
        }
        out
    }

    fn render_line(&self, s: &GameState) -> String {
        let b: String = s.cells.iter().map(|&c| ['.', 'X', 'O'][c as usize]).collect();
        format!("{b} {}", if s.terminal { "end".to_string() } else { format!("p{}", s.player_to_move) })
    }
}
