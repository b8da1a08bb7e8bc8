use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid album configuration: {0}")]
    Config(String),

    #[error("sticker id {id} outside 1..={max}")]
    StickerOutOfRange { id: u32, max: u32 },

    #[error(
        "invalid quadrotte position (sheet {sheet}, row {row}, column {column}) for {sheets} sheets of {rows} rows"
    )]
    InvalidPosition {
        sheet: u32,
        row: u32,
        column: u32,
        sheets: u32,
        rows: u32,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: {message}")]
    Validation { line: u64, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
