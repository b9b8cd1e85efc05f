use thiserror::Error;

use crate::ilp::SolveError;
use crate::mst::MstError;
use crate::synth::SynthError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON on line {line}: {source}")]
    Json {
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("instance `{id}` is not well formed: {}", violations.join("; "))]
    Schema { id: String, violations: Vec<String> },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error(transparent)]
    Mst(#[from] MstError),

    #[error(transparent)]
    Synth(#[from] SynthError),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
