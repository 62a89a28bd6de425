//! Concrete rule sets: TicTacToe, Nim, Nim3P, ConnectFour, Hex, Othello and
//! 2048, selected at runtime through [`GameSpec`] and [`AnyGame`].

mod connect_four;
mod g2048;
pub(crate) mod geometry;
mod hex;
mod nim;
mod oracle;
mod othello;
mod tictactoe;

use std::fmt;
use std::str::FromStr;

pub use connect_four::ConnectFour;
pub use g2048::{Game2048, DOWN, LEFT, RIGHT, UP};
pub use hex::Hex;
pub use nim::{Nim, NIM3P_PREDECESSOR_REWARD};
pub use oracle::{game_oracle_value, DEFAULT_ORACLE_BUDGET};
pub use othello::Othello;
pub use tictactoe::TicTacToe;

use crate::error::{Error, Result};
use crate::game::{ActionId, Game, GameRng, GameState, Symmetry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    TicTacToe,
    Nim,
    Nim3P,
    ConnectFour,
    Hex,
    Othello,
    G2048,
}

/// Which game, with its size parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GameSpec {
    pub kind: GameKind,
    /// Nim heaps `h`.
    pub heaps: u8,
    /// Nim stones per heap `s`.
    pub stones: u8,
    /// Hex board side.
    pub side: u8,
}

impl GameSpec {
    fn plain(kind: GameKind) -> Self {
        GameSpec { kind, heaps: 0, stones: 0, side: 0 }
    }

    pub fn tictactoe() -> Self {
        Self::plain(GameKind::TicTacToe)
    }

    pub fn nim(heaps: u8, stones: u8) -> Self {
        GameSpec { kind: GameKind::Nim, heaps, stones, side: 0 }
    }

    pub fn nim3p(heaps: u8, stones: u8) -> Self {
        GameSpec { kind: GameKind::Nim3P, heaps, stones, side: 0 }
    }

    pub fn connect_four() -> Self {
        Self::plain(GameKind::ConnectFour)
    }

    pub fn hex(side: u8) -> Self {
        GameSpec { kind: GameKind::Hex, heaps: 0, stones: 0, side }
    }

    pub fn othello() -> Self {
        Self::plain(GameKind::Othello)
    }

    pub fn g2048() -> Self {
        Self::plain(GameKind::G2048)
    }

    pub fn num_players(&self) -> usize {
        match self.kind {
            GameKind::G2048 => 1,
            GameKind::Nim3P => 3,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            GameKind::Nim | GameKind::Nim3P => {
                let (h, s) = (self.heaps as usize, self.stones as usize);
                if h < 1 || s < 1 {
                    return Err(Error::InvalidSpec(format!("Nim needs h >= 1 and s >= 1, got {h}x{s}")));
                }
                if h > 6 {
                    return Err(Error::InvalidSpec(format!("at most 6 heaps supported, got {h}")));
                }
                if h * s > u16::MAX as usize || s >= u8::MAX as usize {
                    return Err(Error::InvalidSpec(format!("Nim {h}x{s} too large")));
                }
            }
            GameKind::Hex if !(2..=8).contains(&self.side) => {
                return Err(Error::InvalidSpec(format!("Hex side must be 2..=8, got {}", self.side)));
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GameKind::TicTacToe => write!(f, "tictactoe"),
            GameKind::Nim => write!(f, "nim:{}x{}", self.heaps, self.stones),
            GameKind::Nim3P => write!(f, "nim3p:{}x{}", self.heaps, self.stones),
            GameKind::ConnectFour => write!(f, "connectfour"),
            GameKind::Hex => write!(f, "hex:{}", self.side),
            GameKind::Othello => write!(f, "othello"),
            GameKind::G2048 => write!(f, "2048"),
        }
    }
}

impl FromStr for GameSpec {
    type Err = Error;

    /// `tictactoe`, `nim:3x5`, `nim3p:3x5`, `connectfour`, `hex:6`,
    /// `othello`, `2048`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s.as_str(), None),
        };
        let heaps_stones = |arg: Option<&str>| -> Result<(u8, u8)> {
            let a = arg.unwrap_or("3x5");
            let (h, st) = a.split_once('x').ok_or_else(|| Error::InvalidSpec(format!("expected HxS, got '{a}'")))?;
            let p = |x: &str| x.parse::<u8>().map_err(|_| Error::InvalidSpec(format!("bad number '{x}'")));
            Ok((p(h)?, p(st)?))
        };
        let spec = match name {
            "tictactoe" | "ttt" => GameSpec::tictactoe(),
            "nim" => {
                let (h, st) = heaps_stones(arg)?;
                GameSpec::nim(h, st)
            }
            "nim3p" => {
                let (h, st) = heaps_stones(arg)?;
                GameSpec::nim3p(h, st)
            }
            "connectfour" | "c4" => GameSpec::connect_four(),
            "hex" => {
                let side = arg.unwrap_or("6").parse::<u8>().map_err(|_| Error::InvalidSpec(format!("bad Hex side in '{s}'")))?;
                GameSpec::hex(side)
            }
            "othello" => GameSpec::othello(),
            "2048" => GameSpec::g2048(),
            other => return Err(Error::InvalidSpec(format!("unknown game '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Runtime-selected game.
#[derive(Clone, Copy, Debug)]
pub enum AnyGame {
    TicTacToe(TicTacToe),
    Nim(Nim),
    ConnectFour(ConnectFour),
    Hex(Hex),
    Othello(Othello),
    G2048(Game2048),
}

/// Builds the rule bundle for `spec`.
pub fn new_game(spec: &GameSpec) -> Result<AnyGame> {
    spec.validate()?;
    Ok(match spec.kind {
        GameKind::TicTacToe => AnyGame::TicTacToe(TicTacToe),
        GameKind::Nim => AnyGame::Nim(Nim::new(spec.heaps as usize, spec.stones as usize, 2)),
        GameKind::Nim3P => AnyGame::Nim(Nim::new(spec.heaps as usize, spec.stones as usize, 3)),
        GameKind::ConnectFour => AnyGame::ConnectFour(ConnectFour),
        GameKind::Hex => AnyGame::Hex(Hex::new(spec.side as usize)),
        GameKind::Othello => AnyGame::Othello(Othello),
        GameKind::G2048 => AnyGame::G2048(Game2048),
    })
}

macro_rules! dispatch {
    ($self:ident, $g:ident => $e:expr) => {
        match $self {
            AnyGame::TicTacToe($g) => $e,
            AnyGame::Nim($g) => $e,
            AnyGame::ConnectFour($g) => $e,
            AnyGame::Hex($g) => $e,
            AnyGame::Othello($g) => $e,
            AnyGame::G2048($g) => $e,
        }
    };
}

impl Game for AnyGame {
    fn name(&self) -> String {
        dispatch!(self, g => g.name())
    }
    fn num_players(&self) -> usize {
        dispatch!(self, g => g.num_players())
    }
    fn num_cells(&self) -> usize {
        dispatch!(self, g => g.num_cells())
    }
    fn cell_alphabet(&self) -> usize {
        dispatch!(self, g => g.cell_alphabet())
    }
    fn num_actions(&self) -> usize {
        dispatch!(self, g => g.num_actions())
    }
    fn is_deterministic(&self) -> bool {
        dispatch!(self, g => g.is_deterministic())
    }
    fn initial_state(&self, rng: &mut GameRng) -> GameState {
        dispatch!(self, g => g.initial_state(rng))
    }
    #[inline]
    fn legal_actions_into(&self, s: &GameState, out: &mut Vec<ActionId>) {
        dispatch!(self, g => g.legal_actions_into(s, out))
    }
    #[inline]
    fn is_legal(&self, s: &GameState, a: ActionId) -> bool {
        dispatch!(self, g => g.is_legal(s, a))
    }
    #[inline]
    fn compute_afterstate(&self, s: &GameState, a: ActionId) -> GameState {
        dispatch!(self, g => g.compute_afterstate(s, a))
    }
    #[inline]
    fn add_random_part(&self, after: &GameState, rng: &mut GameRng) -> GameState {
        dispatch!(self, g => g.add_random_part(after, rng))
    }
    fn symmetries(&self) -> Vec<Symmetry> {
        dispatch!(self, g => g.symmetries())
    }
    fn reward_range(&self) -> (f64, f64) {
        dispatch!(self, g => g.reward_range())
    }
    fn cell_neighbors(&self, cell: usize) -> Vec<usize> {
        dispatch!(self, g => g.cell_neighbors(cell))
    }
    fn render(&self, s: &GameState) -> String {
        dispatch!(self, g => g.render(s))
    }
    fn render_line(&self, s: &GameState) -> String {
        dispatch!(self, g => g.render_line(s))
    }
    fn action_label(&self, a: ActionId) -> String {
        dispatch!(self, g => g.action_label(a))
    }
    fn parse_action(&self, text: &str) -> Option<ActionId> {
        dispatch!(self, g => g.parse_action(text))
    }
}

impl AnyGame {
    /// Evaluation start positions: TicTacToe uses the empty board plus all
    /// nine one-ply openings, Othello the 244 four-ply sequences, every
    /// other game its standard opening.
    pub fn evaluation_starts(&self, rng: &mut GameRng) -> Vec<GameState> {
        match self {
            AnyGame::TicTacToe(g) => {
                let s0 = g.initial_state(rng);
                let mut v = vec![s0];
                v.extend((0..9).map(|a| g.compute_afterstate(&s0, ActionId(a))));
                v
            }
            AnyGame::Othello(g) => g.start_positions(4),
            _ => vec![self.initial_state(rng)],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;

    #[test]
    fn spec_round_trips_through_text() {
        for text in ["tictactoe", "nim:3x5", "nim3p:3x5", "connectfour", "hex:6", "othello", "2048"] {
            let spec: GameSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!("nim:0x5".parse::<GameSpec>().is_err());
        assert!("chess".parse::<GameSpec>().is_err());
        assert!("hex:12".parse::<GameSpec>().is_err());
    }

    #[test]
    fn nim_openings() {
        let mut rng = rng_from_seed(0);
        let g = new_game(&GameSpec::nim(3, 5)).unwrap();
        let s = g.initial_state(&mut rng);
        assert_eq!(&s.cells[..], &[5, 5, 5]);
        assert_eq!(s.player_to_move, 0);
        assert_eq!(g.num_players(), 2);
        let g3 = new_game(&GameSpec::nim3p(3, 5)).unwrap();
        assert_eq!(&g3.initial_state(&mut rng).cells[..], &[5, 5, 5]);
        assert_eq!(g3.num_players(), 3);
    }

    #[test]
    fn hex_opening_is_empty() {
        let g = new_game(&GameSpec::hex(6)).unwrap();
        let s = g.initial_state(&mut rng_from_seed(0));
        assert_eq!(s.cells.len(), 36);
        assert!(s.cells.iter().all(|&c| c == 0));
    }

    #[test]
    fn player_counts_follow_the_kind() {
        assert_eq!(GameSpec::g2048().num_players(), 1);
        assert_eq!(GameSpec::nim3p(3, 5).num_players(), 3);
        assert_eq!(GameSpec::othello().num_players(), 2);
    }
}
