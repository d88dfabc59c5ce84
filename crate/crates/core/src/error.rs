use std::path::PathBuf;

/// Errors raised by the simulator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(
        "insufficient feedback: {bits} bits cannot give at least one bit to each of {nodes} nodes"
    )]
    InsufficientFeedback { bits: u32, nodes: usize },
    #[error("quadratic interpolation needs at least three nodes, got {0}")]
    NeedsThreeNodes(usize),
    #[error("BER is undefined when no subcarrier carries bits")]
    UndefinedBer,
    #[error("inconsistent state: {0}")]
    InconsistentState(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by a bad configuration rather than a failed run.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::InvalidParameter(_) | Error::InsufficientFeedback { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
