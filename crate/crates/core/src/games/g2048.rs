use rand::Rng;

use crate::game::{ActionId, Game, GameRng, GameState, Symmetry};
use crate::games::geometry::{dihedral_destinations, dihedral_transform};

const SIDE: usize = 4;
const CELLS: usize = 16;
/// Largest tile exponent representable with a 16-letter cell alphabet.
const MAX_EXP: u8 = 15;
/// Probability that a spawned tile is a 2 (otherwise a 4).
pub const SPAWN_TWO_PROB: f64 = 0.9;

pub const UP: ActionId = ActionId(0);
pub const RIGHT: ActionId = ActionId(1);
pub const DOWN: ActionId = ActionId(2);
pub const LEFT: ActionId = ActionId(3);

const DIR_VECTORS: [(isize, isize); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

/// Single-player 2048. Cells hold tile exponents (0 = empty, k = tile 2^k).
///
/// The afterstate is the slid board; the next state adds one random tile.
/// The score is the running sum of merged tile values.
#[derive(Clone, Copy, Debug, Default)]
pub struct Game2048;

/// Slides all four lines in direction `dir`. Returns the new cells and the
/// merge score.
fn slide(cells: &[u8], dir: usize) -> ([u8; CELLS], f64) {
    let mut out = [0u8; CELLS];
    let mut gain = 0.0;
    for line in 0..SIDE {
        // Indices ordered from the edge the tiles move towards.
        let idx: [usize; SIDE] = std::array::from_fn(|k| match dir {
            0 => k * SIDE + line,
            1 => line * SIDE + (SIDE - 1 - k),
            2 => (SIDE - 1 - k) * SIDE + line,
            _ => line * SIDE + k,
        });
        let mut packed = [0u8; SIDE];
        let mut n = 0;
        let mut pending: Option<u8> = None;
        for &i in &idx {
            let v = cells[i];
            if v == 0 {
                continue;
            }
            match pending {
                Some(p) if p == v && v < MAX_EXP => {
                    packed[n] = v + 1;
                    n += 1;
                    gain += (1u64 << (v + 1)) as f64;
                    pending = None;
                }
                Some(p) => {
                    packed[n] = p;
                    n += 1;
                    pending = Some(v);
                }
                None => pending = Some(v),
            }
        }
        if let Some(p) = pending {
            packed[n] = p;
        }
        for (k, &i) in idx.iter().enumerate() {
            out[i] = packed[k];
        }
    }
    (out, gain)
}

impl Game2048 {
    fn has_any_move(cells: &[u8]) -> bool {
        (0..4).any(|d| slide(cells, d).0[..] != cells[..])
    }

    pub fn state_from_tiles(&self, tiles: &[u32; CELLS]) -> GameState {
        let cells: Vec<u8> = tiles.iter().map(|&t| if t == 0 { 0 } else { t.trailing_zeros() as u8 }).collect();
        let mut s = GameState::new(&cells, 0);
        s.terminal = !Self::has_any_move(&s.cells);
        s
    }

    /// Every possible next state of an afterstate with its probability.
    pub fn random_outcomes(&self, after: &GameState) -> Vec<(f64, GameState)> {
        let empties: Vec<usize> = (0..CELLS).filter(|&i| after.cells[i] == 0).collect();
        let mut out = Vec::with_capacity(2 * empties.len());
        for &i in &empties {
            for (exp, p) in [(1u8, SPAWN_TWO_PROB), (2u8, 1.0 - SPAWN_TWO_PROB)] {
                let mut n = *after;
                n.cells[i] = exp;
                n.terminal = !Self::has_any_move(&n.cells);
                out.push((p / empties.len() as f64, n));
            }
        }
        out
    }

    fn spawn(cells: &mut [u8], rng: &mut GameRng) {
        let empties = cells.iter().filter(|&&c| c == 0).count();
        if empties == 0 {
            return;
        }
        let k = rng.gen_range(0..empties);
        let exp = if rng.gen_bool(SPAWN_TWO_PROB) { 1 } else { 2 };
        if let Some(c) = cells.iter_mut().filter(|c| **c == 0).nth(k) {
            *c = exp;
        }
    }

    pub fn max_tile(s: &GameState) -> u32 {
        s.cells.iter().map(|&e| if e == 0 { 0 } else { 1u32 << e }).max().unwrap_or(0)
    }
}

impl Game for Game2048 {
    fn name(&self) -> String {
        "2048".into()
    }
    fn num_players(&self) -> usize {
        1
    }
    fn num_cells(&self) -> usize {
        CELLS
    }
    fn cell_alphabet(&self) -> usize {
        MAX_EXP as usize + 1
    }
    fn num_actions(&self) -> usize {
        4
    }
    fn is_deterministic(&self) -> bool {
        false
    }

    fn initial_state(&self, rng: &mut GameRng) -> GameState {
        let mut s = GameState::new(&[0; CELLS], 0);
        Self::spawn(&mut s.cells, rng);
        Self::spawn(&mut s.cells, rng);
        s
    }

    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>) {
        out.extend((0..4).filter(|&d| slide(&s.cells, d).0[..] != s.cells[..]).map(|d| ActionId(d as u16)));
    }

    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        a.index() < 4 && slide(&s.cells, a.index()).0[..] != s.cells[..]
    }

    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState {
        let (cells, gain) = slide(&s.cells, a.index());
        let mut n = *s;
        n.cells.copy_from_slice(&cells);
        n.scores[0] += gain;
        n.move_counter += 1;
        n
    }

    fn add_random_part(&self, after: &GameState, rng: &mut GameRng) -> GameState {
        let mut n = *after;
        Self::spawn(&mut n.cells, rng);
        n.terminal = !Self::has_any_move(&n.cells);
        n
    }

    fn symmetries(&self) -> Vec<Symmetry> {
        dihedral_destinations(SIDE)
            .into_iter()
            .enumerate()
            .map(|(k, dest)| {
                let amap = DIR_VECTORS
                    .iter()
                    .map(|&(dr, dc)| {
                        let (r0, c0) = dihedral_transform(k, SIDE, 1, 1);
                        let (r1, c1) = dihedral_transform(k, SIDE, (1 + dr) as usize, (1 + dc) as usize);
                        let v = (r1 as isize - r0 as isize, c1 as isize - c0 as isize);
                        DIR_VECTORS.iter().position(|&d| d == v).expect("direction maps to direction") as u16
                    })
                    .collect();
                Symmetry::from_destinations(&dest, amap)
            })
            .collect()
    }

    fn reward_range(&self) -> (f64, f64) {
        (0.0, (1u64 << (MAX_EXP + 2)) as f64)
    }

    fn cell_neighbors(&self, cell: usize) -> Vec<usize> {
        let (r, c) = (cell / SIDE, cell % SIDE);
        let mut v = Vec::new();
        if r > 0 {
            v.push(cell - SIDE);
        }
        if r + 1 < SIDE {
            v.push(cell + SIDE);
        }
        if c > 0 {
            v.push(cell - 1);
        }
        if c + 1 < SIDE {
            v.push(cell + 1);
        }
        v
    }

    fn render(&self, s: &GameState) -> String {
        let mut out = String::new();
        for r in 0..SIDE {
            for c in 0..SIDE {
                let e = s.cells[r * SIDE + c];
                let t = if e == 0 { ".".to_string() } else { (1u64 << e).to_string() };
                out.push_str(&format!("{t:>6}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("score {}\n", s.scores[0]));
        out
    }

    fn action_label(&self, a: ActionId) -> String {
        ["up", "right", "down", "left"][a.index()].into()
    }

    fn parse_action(&self, text: &str) -> Option<ActionId> {
        match text.trim().to_ascii_lowercase().as_str() {
            "u" | "up" | "w" => Some(UP),
            "r" | "right" | "d" => Some(RIGHT),
            "down" | "s" => Some(DOWN),
            "l" | "left" | "a" => Some(LEFT),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;

    #[test]
    fn merging_two_eights_scores_sixteen() {
        let g = Game2048;
        let s = g.state_from_tiles(&[8, 8, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0]);
        let mut rng = rng_from_seed(3);
        let tr = g.make_action(&s, LEFT, true, &mut rng).unwrap();
        assert_eq!(tr.afterstate.cells[0], 4); // 2^4 = 16
        assert_eq!(tr.rewards[0], 16.0);
        let empties = |st: &GameState| st.cells.iter().filter(|&&c| c == 0).count();
        assert_eq!(empties(&tr.next_state), empties(&tr.afterstate) - 1);
    }

    #[test]
    fn nine_empty_tiles_give_eighteen_next_states() {
        let g = Game2048;
        let after = g.state_from_tiles(&[2, 4, 8, 16, 32, 64, 128, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let outs = g.random_outcomes(&after);
        assert_eq!(outs.len(), 18);
        let total: f64 = outs.iter().map(|o| o.0).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for i in 0..outs.len() {
            for j in 0..i {
                assert_ne!(outs[i].1.cells, outs[j].1.cells);
            }
        }
    }

    #[test]
    fn merge_happens_once_per_tile() {
        let (cells, gain) = slide(&[1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], 3);
        assert_eq!(&cells[..4], &[2, 2, 0, 0]);
        assert_eq!(gain, 8.0);
        let (cells, _) = slide(&[1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0], 1);
        assert_eq!(&cells[..4], &[0, 0, 1, 2]);
    }

    #[test]
    fn symmetric_action_commutes_with_slide() {
        let g = Game2048;
        let mut rng = rng_from_seed(11);
        let s = g.initial_state(&mut rng);
        for sym in g.symmetries() {
            for a in 0..4u16 {
                let lhs = sym.apply_cells(&g.compute_afterstate(&s, ActionId(a)).cells);
                let rhs = g.compute_afterstate(&sym.apply(&s), sym.apply_action(ActionId(a))).cells;
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn full_board_without_merges_is_terminal() {
        let g = Game2048;
        let s = g.state_from_tiles(&[2, 4, 2, 4, 4, 2, 4, 2, 2, 4, 2, 4, 4, 2, 4, 2]);
        assert!(s.terminal);
    }
}
