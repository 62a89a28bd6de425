use std::io;

use thiserror::Error;

use crate::game::ActionId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state is terminal; no legal actions")]
    TerminalState,

    #[error("illegal action {action} in state [{state}]")]
    IllegalAction { action: ActionId, state: String },

    #[error("invalid game spec: {0}")]
    InvalidSpec(String),

    #[error("invalid n-tuple: {0}")]
    InvalidTuple(String),

    #[error("cell value {value} at cell {cell} exceeds alphabet size {alphabet}")]
    CellOutOfRange { cell: usize, value: u8, alphabet: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("network mode mismatch: {0}")]
    ModeMismatch(&'static str),

    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("bad agent file: {0}")]
    Format(String),

    #[error("agent file version {found} not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("agent file checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
