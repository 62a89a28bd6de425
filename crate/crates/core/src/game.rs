//! Game-agnostic state, action and transition types.
//!
//! Every environment in [`crate::games`] implements [`Game`]. States are small
//! `Copy` values; all randomness flows through an explicitly passed
//! [`GameRng`].

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Deref, DerefMut, Index};

use rand::SeedableRng;

use crate::error::{Error, Result};

/// Largest board handled (Othello 8x8).
pub const MAX_CELLS: usize = 64;
/// Largest player count handled (Nim3P).
pub const MAX_PLAYERS: usize = 3;

/// Random stream used by environments, agents and opponents.
pub type GameRng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> GameRng {
    GameRng::seed_from_u64(seed)
}

/// A move from the game's fixed global action alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub u16);

impl ActionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Fixed-capacity board cell vector.
#[derive(Clone, Copy)]
pub struct Cells {
    data: [u8; MAX_CELLS],
    len: u8,
}

impl Cells {
    pub fn new(len: usize) -> Self {
        assert!(len <= MAX_CELLS, "board of {len} cells exceeds {MAX_CELLS}");
        Cells { data: [0; MAX_CELLS], len: len as u8 }
    }

    pub fn from_slice(values: &[u8]) -> Self {
        let mut c = Cells::new(values.len());
        c.data[..values.len()].copy_from_slice(values);
        c
    }
}

impl Deref for Cells {
    type Target = [u8];
    #[inline]
    fn deref(&self) -> &[u8] {
        &self.data[..self.len as usize]
    }
}

impl DerefMut for Cells {
    #[inline]
    fn deref_mut(&mut self) -> &mut [u8] {
        &mut self.data[..self.len as usize]
    }
}

impl PartialEq for Cells {
    fn eq(&self, other: &Self) -> bool {
        **self == **other
    }
}

impl Eq for Cells {}

impl Hash for Cells {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (**self).hash(state)
    }
}

impl fmt::Debug for Cells {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// Board position plus bookkeeping.
///
/// `scores` holds each player's cumulative score; per-transition rewards are
/// differences of it (see [`Game::reward_tuple`]). For a terminal state
/// `player_to_move` is the player who would have moved next.
#[derive(Clone, Copy, Debug)]
pub struct GameState {
    pub cells: Cells,
    pub player_to_move: u8,
    pub move_counter: u32,
    pub terminal: bool,
    pub scores: [f64; MAX_PLAYERS],
}

impl GameState {
    pub fn new(cells: &[u8], player_to_move: u8) -> Self {
        GameState {
            cells: Cells::from_slice(cells),
            player_to_move,
            move_counter: 0,
            terminal: false,
            scores: [0.0; MAX_PLAYERS],
        }
    }

    #[inline]
    pub fn player(&self) -> usize {
        self.player_to_move as usize
    }

    /// Hashable identity of the position: cells and player to move.
    pub fn key(&self) -> StateKey {
        StateKey { cells: self.cells, player: self.player_to_move }
    }

    pub fn with_cells(&self, cells: Cells) -> Self {
        GameState { cells, ..*self }
    }
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
            && self.player_to_move == other.player_to_move
            && self.move_counter == other.move_counter
            && self.terminal == other.terminal
            && self.scores.iter().zip(&other.scores).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StateKey {
    pub cells: Cells,
    pub player: u8,
}

/// One real-valued entry per player.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewardTuple {
    values: [f64; MAX_PLAYERS],
    len: u8,
}

impl RewardTuple {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_PLAYERS);
        RewardTuple { values: [0.0; MAX_PLAYERS], len: n as u8 }
    }

    pub fn from_slice(values: &[f64]) -> Self {
        let mut r = RewardTuple::zeros(values.len());
        r.values[..values.len()].copy_from_slice(values);
        r
    }

    pub fn splat(n: usize, v: f64) -> Self {
        let mut r = RewardTuple::zeros(n);
        r.values[..n].fill(v);
        r
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values[..self.len as usize]
    }

    pub fn sum(&self) -> f64 {
        self.as_slice().iter().sum()
    }

    pub fn set(&mut self, player: usize, v: f64) {
        self.values[..self.len as usize][player] = v;
    }
}

impl Index<usize> for RewardTuple {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

/// Result of applying one action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    /// Per-player delta rewards of this transition.
    pub rewards: RewardTuple,
    pub afterstate: GameState,
    pub next_state: GameState,
}

/// A board symmetry: a cell permutation plus the matching action bijection.
///
/// The image `q` of a state `s` has `q[i] = s[cell_src[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub cell_src: Vec<u8>,
    pub action_map: Vec<u16>,
}

impl Symmetry {
    pub fn identity(n_cells: usize, n_actions: usize) -> Self {
        Symmetry {
            cell_src: (0..n_cells as u8).collect(),
            action_map: (0..n_actions as u16).collect(),
        }
    }

    /// Builds a symmetry from the destination of every cell (`dest[i]` is
    /// where cell `i` ends up).
    pub fn from_destinations(dest: &[usize], action_map: Vec<u16>) -> Self {
        let mut src = vec![0u8; dest.len()];
        for (i, &d) in dest.iter().enumerate() {
            src[d] = i as u8;
        }
        Symmetry { cell_src: src, action_map }
    }

    #[inline]
    pub fn apply_cells(&self, cells: &Cells) -> Cells {
        let mut out = *cells;
        for (o, &src) in out.iter_mut().zip(&self.cell_src) {
            *o = cells[src as usize];
        }
        out
    }

    pub fn apply(&self, s: &GameState) -> GameState {
        s.with_cells(self.apply_cells(&s.cells))
    }

    #[inline]
    pub fn apply_action(&self, a: ActionId) -> ActionId {
        ActionId(self.action_map[a.index()])
    }

    pub fn inverse(&self) -> Symmetry {
        let mut cell_src = vec![0u8; self.cell_src.len()];
        for (i, &s) in self.cell_src.iter().enumerate() {
            cell_src[s as usize] = i as u8;
        }
        let mut action_map = vec![0u16; self.action_map.len()];
        for (a, &b) in self.action_map.iter().enumerate() {
            action_map[b as usize] = a as u16;
        }
        Symmetry { cell_src, action_map }
    }
}

/// Deduplicated symmetry orbit of a state, with the action map that produced
/// each member.
#[derive(Clone, Debug)]
pub struct SymmetrySet {
    pub states: Vec<GameState>,
    pub action_maps: Vec<Vec<u16>>,
}

impl SymmetrySet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, s: &GameState) -> bool {
        self.states.iter().any(|q| q.cells == s.cells)
    }
}

/// Rules of a discrete, turn-based game with one player acting at a time.
pub trait Game: Send + Sync {
    fn name(&self) -> String;
    fn num_players(&self) -> usize;
    fn num_cells(&self) -> usize;
    /// Per-cell alphabet size `P`.
    fn cell_alphabet(&self) -> usize;
    /// Size of the global action alphabet `N_a`.
    fn num_actions(&self) -> usize;

    fn is_deterministic(&self) -> bool {
        true
    }

    fn initial_state(&self, rng: &mut GameRng) -> GameState;

    /// Appends the legal actions of a non-terminal state to `out`.
    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>);

    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        let mut v = Vec::new();
        self.legal_actions_into(s, &mut v);
        v.contains(&a)
    }

    /// Deterministic consequence of a legal action, including score updates.
    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState;

    /// Environment's random contribution; identity for deterministic games.
    fn add_random_part(&self, after: &GameState, _rng: &mut GameRng) -> GameState {
        *after
    }

    /// Full symmetry group, identity first.
    fn symmetries(&self) -> Vec<Symmetry>;

    /// Range of cumulative scores, used when rewards are normalised.
    fn reward_range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    /// Cells adjacent to `cell`, used to grow random-walk n-tuples.
    fn cell_neighbors(&self, cell: usize) -> Vec<usize>;

    fn render(&self, s: &GameState) -> String;

    fn render_line(&self, s: &GameState) -> String {
        let cells: String = s
            .cells
            .iter()
            .map(|&c| char::from_digit(c as u32, 36).unwrap_or('?'))
            .collect();
        if s.terminal {
            format!("{cells} p{} end", s.player_to_move)
        } else {
            format!("{cells} p{}", s.player_to_move)
        }
    }

    fn action_label(&self, a: ActionId) -> String {
        a.0.to_string()
    }

    fn parse_action(&self, text: &str) -> Option<ActionId> {
        text.trim().parse::<u16>().ok().filter(|&a| (a as usize) < self.num_actions()).map(ActionId)
    }

    fn legal_actions(&self, s: &GameState) -> Result<Vec<ActionId>> {
        if s.terminal {
            return Err(Error::TerminalState);
        }
        let mut out = Vec::new();
        self.legal_actions_into(s, &mut out);
        Ok(out)
    }

    /// Applies `a`; with `t_after == false` the returned afterstate is the
    /// next state.
    fn make_action(&self, s: &GameState, a: ActionId, t_after: bool, rng: &mut GameRng) -> Result<Transition> {
        if s.terminal {
            return Err(Error::TerminalState);
        }
        if a.index() >= self.num_actions() || !self.is_legal(s, a) {
            return Err(Error::IllegalAction { action: a, state: self.render_line(s) });
        }
        let after = self.compute_afterstate(s, a);
        let next = self.add_random_part(&after, rng);
        let rewards = self.reward_tuple(s, &next);
        Ok(Transition { rewards, afterstate: if t_after { after } else { next }, next_state: next })
    }

    fn reward_tuple(&self, prev: &GameState, next: &GameState) -> RewardTuple {
        let n = self.num_players();
        let mut r = RewardTuple::zeros(n);
        for p in 0..n {
            r.set(p, next.scores[p] - prev.scores[p]);
        }
        r
    }

    /// The symmetry orbit of `s` (deduplicated), or `{s}` when disabled.
    fn symmetric_states(&self, s: &GameState, use_symmetry: bool) -> SymmetrySet {
        let syms = if use_symmetry { self.symmetries() } else { Vec::new() };
        let mut set = SymmetrySet {
            states: vec![*s],
            action_maps: vec![(0..self.num_actions() as u16).collect()],
        };
        for sym in syms.iter().skip(1) {
            let q = sym.apply(s);
            if !set.contains(&q) {
                set.states.push(q);
                set.action_maps.push(sym.action_map.clone());
            }
        }
        set
    }
}

/// Uniformly random legal action.
pub fn random_action<G: Game + ?Sized>(game: &G, s: &GameState, rng: &mut GameRng) -> Result<ActionId> {
    use rand::seq::SliceRandom;
    let actions = game.legal_actions(s)?;
    Ok(*actions.choose(rng).expect("non-terminal state has a legal action"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetry_inverse_roundtrip() {
        let sym = Symmetry::from_destinations(&[2, 0, 1], vec![1, 2, 0]);
        let s = GameState::new(&[5, 6, 7], 0);
        let back = sym.inverse().apply(&sym.apply(&s));
        assert_eq!(back.cells, s.cells);
        for a in 0..3 {
            assert_eq!(sym.inverse().apply_action(sym.apply_action(ActionId(a))), ActionId(a));
        }
    }

    #[test]
    fn reward_tuple_helpers() {
        let r = RewardTuple::from_slice(&[0.2, 0.0, 1.0]);
        assert_eq!(r.len(), 3);
        assert!((r.sum() - 1.2).abs() < 1e-12);
        assert_eq!(r[2], 1.0);
    }
}
