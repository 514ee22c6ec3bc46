use thiserror::Error;

use crate::color::ColorId;
use crate::graph::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("instance is not color-connected: color {color} induces a disconnected subgraph")]
    NotColorConnected { color: ColorId },

    #[error("contraction rejected: {0}")]
    Contraction(String),

    #[error("decomposition error: {0}")]
    Decomposition(String),

    #[error(
        "table cap exceeded: {size} candidate sequences for one pattern (cap {cap}) at node {node}"
    )]
    TableCap { node: usize, size: usize, cap: usize },

    #[error("input exceeds oracle guard: {0}")]
    Guard(String),

    #[error("generator rejected input: {0}")]
    Generator(String),

    #[error("obstacle {obstacle} has no 4-connected coverage at this resolution")]
    Resolution { obstacle: usize },

    #[error("invalid scene: {0}")]
    Scene(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
