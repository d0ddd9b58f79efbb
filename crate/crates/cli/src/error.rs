//! Error type and the exit-code contract.
//!
//! Mathematical violations are not errors — commands report them as JSON
//! and return exit code 1 themselves. Everything here is either a problem
//! with the input (exit 2) or an exhausted genericity retry budget
//! (exit 3).

use std::io;
use std::path::Path;

use thiserror::Error;

use tropgrass_core::{MetricError, TreeError, TropicalError, VerifyError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },

    /// Newick parse failure, located by line and column in the input.
    #[error("{path}:{line}:{column}: {message}")]
    NewickAt {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    BadVectorJson { path: String, message: String },

    #[error(transparent)]
    Tree(#[from] TreeError),

    #[error(transparent)]
    Metric(#[from] MetricError),

    #[error(transparent)]
    Tropical(#[from] TropicalError),

    #[error(transparent)]
    Verify(#[from] VerifyError),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Exit code for a failed run: 3 when generic coefficient draws ran
    /// out of retries, 2 for every input or usage problem.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(VerifyError::RetriesExhausted { .. }) => 3,
            _ => 2,
        }
    }
}

/// Converts a byte offset into 1-based line and column numbers.
pub fn line_column(text: &str, position: usize) -> (usize, usize) {
    let clamped = position.min(text.len());
    let prefix = &text[..clamped];
    let line = prefix.matches('\n').count() + 1;
    let column = prefix
        .rsplit_once('\n')
        .map_or(clamped, |(_, tail)| tail.len())
        + 1;
    (line, column)
}
