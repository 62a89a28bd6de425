use crate::game::{ActionId, Game, GameRng, GameState, Symmetry};

/// Hex on an `n x n` rhombus. Player 0 (value 1) joins the top and bottom
/// rows, player 1 (value 2) joins the left and right columns. No swap rule.
#[derive(Clone, Copy, Debug)]
pub struct Hex {
    side: usize,
}

impl Hex {
    pub fn new(side: usize) -> Self {
        assert!((2..=8).contains(&side), "Hex side must be 2..=8");
        Hex { side }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    fn neighbors_of(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.side as isize;
        let (r, c) = ((cell / self.side) as isize, (cell % self.side) as isize);
        [(-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)]
            .into_iter()
            .map(move |(dr, dc)| (r + dr, c + dc))
            .filter(move |&(nr, nc)| nr >= 0 && nc >= 0 && nr < n && nc < n)
            .map(move |(nr, nc)| (nr * n + nc) as usize)
    }

    /// Whether `player` has a chain between its two edges.
    pub fn has_chain(&self, cells: &[u8], player: usize) -> bool {
        let n = self.side;
        let v = player as u8 + 1;
        let on_start = |i: usize| if player == 0 { i / n == 0 } else { i % n == 0 };
        let on_goal = |i: usize| if player == 0 { i / n == n - 1 } else { i % n == n - 1 };
        let mut seen = vec![false; n * n];
        let mut stack: Vec<usize> = (0..n * n).filter(|&i| on_start(i) && cells[i] == v).collect();
        for &i in &stack {
            seen[i] = true;
        }
        while let Some(i) = stack.pop() {
            if on_goal(i) {
                return true;
            }
            for j in self.neighbors_of(i) {
                if !seen[j] && cells[j] == v {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        false
    }
}

impl Game for Hex {
    fn name(&self) -> String {
        format!("hex:{}", self.side)
    }
    fn num_players(&self) -> usize {
        2
    }
    fn num_cells(&self) -> usize {
        self.side * self.side
    }
    fn cell_alphabet(&self) -> usize {
        3
    }
    fn num_actions(&self) -> usize {
        self.side * self.side
    }

    fn initial_state(&self, _rng: &mut GameRng) -> GameState {
        GameState::new(&vec![0; self.side * self.side], 0)
    }

    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>) {
        out.extend(s.cells.iter().enumerate().filter(|(_, &c)| c == 0).map(|(i, _)| ActionId(i as u16)));
    }

    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        s.cells.get(a.index()) == Some(&0)
    }

    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState {
        let p = s.player();
        let mut n = *s;
        n.cells[a.index()] = p as u8 + 1;
        n.move_counter += 1;
        n.player_to_move = 1 - p as u8;
        if self.has_chain(&n.cells, p) {
            n.terminal = true;
            n.scores[p] = 1.0;
            n.scores[1 - p] = 0.0;
        }
        n
    }

    /// Identity and the 180 degree rotation.
    fn symmetries(&self) -> Vec<Symmetry> {
        let cells = self.side * self.side;
        let rot: Vec<usize> = (0..cells).map(|i| cells - 1 - i).collect();
        let amap = rot.iter().map(|&x| x as u16).collect();
        vec![Symmetry::identity(cells, cells), Symmetry::from_destinations(&rot, amap)]
    }

    fn cell_neighbors(&self, cell: usize) -> Vec<usize> {
        self.neighbors_of(cell).collect()
    }

    fn render(&self, s: &GameState) -> String {
        let n = self.side;
        let mut out = String::new();
        for r in 0..n {
            out.push_str(&" ".repeat(r));
            for c in 0..n {
                out.push(['.', 'X', 'O'][s.cells[r * n + c] as usize]);
                out.push(' ');
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;

    #[test]
    fn straight_column_wins_for_player_zero() {
        let g = Hex::new(3);
        let mut s = g.initial_state(&mut rng_from_seed(0));
        // X: 0,3,6 (column 0, top to bottom); O: 1,2
        for a in [0, 1, 3, 2] {
            s = g.compute_afterstate(&s, ActionId(a));
            assert!(!s.terminal);
        }
        let s = g.compute_afterstate(&s, ActionId(6));
        assert!(s.terminal);
        assert_eq!(s.scores[0], 1.0);
    }

    #[test]
    fn rotation_is_an_involution() {
        let g = Hex::new(6);
        let rot = &g.symmetries()[1];
        let mut s = g.initial_state(&mut rng_from_seed(0));
        s.cells[1] = 1;
        s.cells[7] = 2;
        assert_eq!(rot.apply(&rot.apply(&s)).cells, s.cells);
    }

    #[test]
    fn interior_cell_has_six_neighbors() {
        assert_eq!(Hex::new(6).cell_neighbors(14).len(), 6);
        assert_eq!(Hex::new(6).cell_neighbors(0).len(), 2);
    }
}
