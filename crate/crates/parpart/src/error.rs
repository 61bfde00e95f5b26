use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed JSON or a shape mismatch, with its location in the file.
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed JSON whose content is inconsistent.
    #[error("{}: {message}", path.display())]
    Content { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] parpart_core::Error),
}
