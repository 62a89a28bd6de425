use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{Game, GameRng};

/// How the tuple cell lists of a network are produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TupleLayout {
    /// `count` tuples of `len` distinct cells drawn uniformly.
    Random { count: usize, len: usize },
    /// `count` tuples grown by random walks over the board's neighbourhood.
    RandomWalk { count: usize, len: usize },
    /// Four 2x3 rectangles on the 4x4 board of 2048.
    Rect2048,
    /// `copies` tuples that each cover every cell in order.
    AllCells { copies: usize },
    Explicit(Vec<Vec<usize>>),
}

/// Cells of the four 6-cell rectangles used for 2048.
pub const RECT_2048: [[usize; 6]; 4] = [
    [0, 1, 2, 4, 5, 6],
    [1, 2, 3, 5, 6, 7],
    [4, 5, 6, 8, 9, 10],
    [5, 6, 7, 9, 10, 11],
];

impl TupleLayout {
    /// Produces the cell lists; random layouts draw from `rng` once, after
    /// which the tuples stay fixed.
    pub fn generate<G: Game + ?Sized>(&self, game: &G, rng: &mut GameRng) -> Result<Vec<Vec<usize>>> {
        let cells = game.num_cells();
        let check_len = |len: usize| {
            if len == 0 || len > cells {
                Err(Error::InvalidTuple(format!("tuple length {len} not in 1..={cells}")))
            } else {
                Ok(())
            }
        };
        match self {
            TupleLayout::Random { count, len } => {
                check_len(*len)?;
                let mut all: Vec<usize> = (0..cells).collect();
                Ok((0..*count)
                    .map(|_| {
                        all.shuffle(rng);
                        all[..*len].to_vec()
                    })
                    .collect())
            }
            TupleLayout::RandomWalk { count, len } => {
                check_len(*len)?;
                Ok((0..*count).map(|_| random_walk(game, *len, rng)).collect())
            }
            TupleLayout::Rect2048 => {
                if cells != 16 {
                    return Err(Error::InvalidTuple("rectangle layout needs a 4x4 board".into()));
                }
                Ok(RECT_2048.iter().map(|r| r.to_vec()).collect())
            }
            TupleLayout::AllCells { copies } => Ok((0..*copies).map(|_| (0..cells).collect()).collect()),
            TupleLayout::Explicit(t) => Ok(t.clone()),
        }
    }
}

/// Grows a tuple by walking to random neighbours; revisits are allowed but
/// only new cells are added. Falls back to any unvisited neighbour of the
/// set if the walk stalls.
fn random_walk<G: Game + ?Sized>(game: &G, len: usize, rng: &mut GameRng) -> Vec<usize> {
    let n = game.num_cells();
    let mut cur = rng.gen_range(0..n);
    let mut out = vec![cur];
    let mut steps = 0;
    while out.len() < len {
        steps += 1;
        if steps > 50 * len {
            let frontier: Vec<usize> = out
                .iter()
                .flat_map(|&c| game.cell_neighbors(c))
                .filter(|c| !out.contains(c))
                .unique()
                .collect();
            let next = match frontier.choose(rng) {
                Some(&c) => c,
                None => *(0..n).filter(|c| !out.contains(c)).collect::<Vec<_>>().choose(rng).expect("len <= cells"),
            };
            out.push(next);
            cur = next;
            steps = 0;
            continue;
        }
        let nb = game.cell_neighbors(cur);
        if let Some(&next) = nb.choose(rng) {
            cur = next;
            if !out.contains(&cur) {
                out.push(cur);
            }
        } else {
            steps = 50 * len;
        }
    }
    out
}

impl FromStr for TupleLayout {
    type Err = Error;

    /// `random:COUNTxLEN`, `walk:COUNTxLEN`, `2048-rect`, `all:COPIES`, or
    /// `cells:0,1,2/3,4,5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParam(format!("bad tuple layout '{s}'"));
        let count_len = |arg: &str| -> Result<(usize, usize)> {
            let (c, l) = arg.split_once('x').ok_or_else(bad)?;
            Ok((c.trim().parse().map_err(|_| bad())?, l.trim().parse().map_err(|_| bad())?))
        };
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "random" => count_len(arg).map(|(count, len)| TupleLayout::Random { count, len }),
            "walk" => count_len(arg).map(|(count, len)| TupleLayout::RandomWalk { count, len }),
            "2048-rect" => Ok(TupleLayout::Rect2048),
            "all" => Ok(TupleLayout::AllCells { copies: if arg.is_empty() { 1 } else { arg.parse().map_err(|_| bad())? } }),
            "cells" => arg
                .split('/')
                .map(|t| t.split(',').map(|c| c.trim().parse::<usize>().map_err(|_| bad())).collect())
                .collect::<Result<Vec<Vec<usize>>>>()
                .map(TupleLayout::Explicit),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for TupleLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleLayout::Random { count, len } => write!(f, "random:{count}x{len}"),
            TupleLayout::RandomWalk { count, len } => write!(f, "walk:{count}x{len}"),
            TupleLayout::Rect2048 => write!(f, "2048-rect"),
            TupleLayout::AllCells { copies } => write!(f, "all:{copies}"),
            TupleLayout::Explicit(t) => {
                write!(f, "cells:{}", t.iter().map(|c| c.iter().join(",")).join("/"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::rng_from_seed;
    use crate::games::{ConnectFour, Hex, TicTacToe};

    #[test]
    fn walk_tuples_are_connected_and_distinct() {
        let g = ConnectFour;
        let mut rng = rng_from_seed(5);
        let tuples = TupleLayout::RandomWalk { count: 70, len: 8 }.generate(&g, &mut rng).unwrap();
        assert_eq!(tuples.len(), 70);
        for t in &tuples {
            assert_eq!(t.len(), 8);
            assert_eq!(t.iter().unique().count(), 8);
            for (k, &c) in t.iter().enumerate().skip(1) {
                let linked = t[..k].iter().any(|&p| g.cell_neighbors(p).contains(&c));
                assert!(linked, "cell {c} not adjacent to earlier cells of {t:?}");
            }
        }
    }

    #[test]
    fn random_full_permutation() {
        let t = TupleLayout::Random { count: 1, len: 9 }.generate(&TicTacToe, &mut rng_from_seed(1)).unwrap();
        let mut sorted = t[0].clone();
        sorted.sort();
        assert_eq!(sorted, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn text_round_trip() {
        for text in ["random:1x9", "walk:25x6", "2048-rect", "all:2", "cells:0,1,2/3,4"] {
            assert_eq!(text.parse::<TupleLayout>().unwrap().to_string(), text);
        }
        assert!("walk:3".parse::<TupleLayout>().is_err());
        assert!(TupleLayout::RandomWalk { count: 1, len: 37 }.generate(&Hex::new(6), &mut rng_from_seed(0)).is_err());
    }
}
