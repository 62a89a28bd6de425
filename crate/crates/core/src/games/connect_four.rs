use crate::game::{ActionId, Game, GameRng, GameState, Symmetry};
use crate::games::geometry::king_neighbors;

pub const ROWS: usize = 6;
pub const COLS: usize = 7;

/// ConnectFour on the standard 6x7 board. Cell `r * 7 + c` with row 0 at the
/// bottom; the action is the column.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConnectFour;

impl ConnectFour {
    fn drop_row(cells: &[u8], col: usize) -> Option<usize> {
        (0..ROWS).find(|&r| cells[r * COLS + col] == 0)
    }

    fn connects_four(cells: &[u8], row: usize, col: usize) -> bool {
        let v = cells[row * COLS + col];
        let count = |dr: isize, dc: isize| {
            let mut n = 0;
            let (mut r, mut c) = (row as isize + dr, col as isize + dc);
            while r >= 0 && c >= 0 && r < ROWS as isize && c < COLS as isize && cells[r as usize * COLS + c as usize] == v {
                n += 1;
                r += dr;
                c += dc;
            }
            n
        };
        [(0, 1), (1, 0), (1, 1), (1, -1)].iter().any(|&(dr, dc)| 1 + count(dr, dc) + count(-dr, -dc) >= 4)
    }

    /// Builds a position from column drops (player 0 first).
    pub fn state_from_moves(&self, columns: &[usize]) -> GameState {
        let mut s = GameState::new(&[0; ROWS * COLS], 0);
        for &c in columns {
            s = self.compute_afterstate(&s, ActionId(c as u16));
        }
        s
    }
}

impl Game for ConnectFour {
    fn name(&self) -> String {
        "connectfour".into()
    }
    fn num_players(&self) -> usize {
        2
    }
    fn num_cells(&self) -> usize {
        ROWS * COLS
    }
    fn cell_alphabet(&self) -> usize {
        3
    }
    fn num_actions(&self) -> usize {
        COLS
    }

    fn initial_state(&self, _rng: &mut GameRng) -> GameState {
        GameState::new(&[0; ROWS * COLS], 0)
    }

    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>) {
        out.extend((0..COLS).filter(|&c| s.cells[(ROWS - 1) * COLS + c] == 0).map(|c| ActionId(c as u16)));
    }

    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        a.index() < COLS && s.cells[(ROWS - 1) * COLS + a.index()] == 0
    }

    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState {
        let col = a.index();
        let row = Self::drop_row(&s.cells, col).expect("column has room");
        let p = s.player();
        let mut n = *s;
        n.cells[row * COLS + col] = p as u8 + 1;
        n.move_counter += 1;
        n.player_to_move = 1 - p as u8;
        if Self::connects_four(&n.cells, row, col) {
            n.terminal = true;
            n.scores[p] = 1.0;
            n.scores[1 - p] = 0.0;
        } else if n.move_counter as usize == ROWS * COLS {
            n.terminal = true;
            n.scores[0] = 0.5;
            n.scores[1] = 0.5;
        }
        n
    }

    /// Identity and left-right mirror; gravity rules out the other maps.
    fn symmetries(&self) -> Vec<Symmetry> {
        let mirror: Vec<usize> = (0..ROWS * COLS).map(|i| (i / COLS) * COLS + (COLS - 1 - i % COLS)).collect();
        vec![
            Symmetry::identity(ROWS * COLS, COLS),
            Symmetry::from_destinations(&mirror, (0..COLS as u16).rev().collect()),
        ]
    }

    fn cell_neighbors(&self, cell: usize) -> Vec<usize> {
        king_neighbors(ROWS, COLS, cell)
    }

    fn render(&self, s: &GameState) -> String {
        let mut out = String::new();
        for r in (0..ROWS).rev() {
            for c in 0..COLS {
                out.push(['.', 'X', 'O'][s.cells[r * COLS + c] as usize]);
            }
            out.push('\n');
        }
        out.push_str("0123456\n");
        out
    }
}
