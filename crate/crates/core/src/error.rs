use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("cubulation is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("operation requires a complete cubulation ({open} open facets)")]
    Partial { open: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("search budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },

    /// A search the construction guarantees to succeed came back empty.
    #[error("no witness found: {0}")]
    NotFound(String),

    #[error("census file: {0}")]
    Census(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
