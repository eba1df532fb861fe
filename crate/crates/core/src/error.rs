use thiserror::Error;

/// Text that failed to parse, with an optional character position.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{msg}{}", pos.map(|p| format!(" at position {p}")).unwrap_or_default())]
pub struct ParseError {
    pub msg: String,
    pub pos: Option<usize>,
}

impl ParseError {
    pub fn new(msg: impl Into<String>) -> ParseError {
        ParseError {
            msg: msg.into(),
            pos: None,
        }
    }

    pub fn at(msg: impl Into<String>, pos: usize) -> ParseError {
        ParseError {
            msg: msg.into(),
            pos: Some(pos),
        }
    }
}

/// Errors raised by catalogue lookups and tile-level operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TileError {
    #[error("unknown catalogue {0:?}")]
    UnknownCatalogue(String),
    #[error("tile is not in the expected context: {0}")]
    WrongContext(String),
    #[error("tile has no canonical name: {0}")]
    Unnameable(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}
