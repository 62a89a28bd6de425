use crate::error::{Error, Result};

/// A sequence of board cells whose joint contents, read as an n-digit base-P
/// number, index one look-up table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NTupleDef {
    cells: Vec<u8>,
    alphabet: usize,
}

impl NTupleDef {
    pub fn new(cells: Vec<usize>, alphabet: usize, num_cells: usize) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidTuple("empty tuple".into()));
        }
        if alphabet < 2 {
            return Err(Error::InvalidTuple(format!("alphabet size {alphabet} < 2")));
        }
        for (k, &c) in cells.iter().enumerate() {
            if c >= num_cells {
                return Err(Error::InvalidTuple(format!("cell {c} outside board of {num_cells} cells")));
            }
            if cells[..k].contains(&c) {
                return Err(Error::InvalidTuple(format!("cell {c} appears twice")));
            }
        }
        let len = (alphabet as u128).checked_pow(cells.len() as u32);
        if len.map_or(true, |l| l > u32::MAX as u128) {
            return Err(Error::InvalidTuple(format!("LUT of {alphabet}^{} entries is too large", cells.len())));
        }
        Ok(NTupleDef { cells: cells.into_iter().map(|c| c as u8).collect(), alphabet })
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells.iter().map(|&c| c as usize)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// `P^n`.
    pub fn lut_len(&self) -> usize {
        self.alphabet.pow(self.cells.len() as u32)
    }

    /// `Σ_k board[cells[k]] · P^k`, rejecting out-of-alphabet cell values.
    pub fn lut_index(&self, board: &[u8]) -> Result<usize> {
        let mut idx = 0usize;
        for &c in self.cells.iter().rev() {
            let v = board[c as usize];
            if v as usize >= self.alphabet {
                return Err(Error::CellOutOfRange { cell: c as usize, value: v, alphabet: self.alphabet });
            }
            idx = idx * self.alphabet + v as usize;
        }
        Ok(idx)
    }

    /// Unchecked variant for boards already known to fit the alphabet.
    #[inline]
    pub(crate) fn index_fast(&self, board: &[u8]) -> usize {
        let p = self.alphabet;
        self.cells.iter().rev().fold(0, |acc, &c| acc * p + board[c as usize] as usize)
    }
}
