use std::io;
use std::path::PathBuf;

/// Harness error. [`BenchError::exit_code`] maps it onto the CLI contract:
/// 1 for anything wrong with the inputs, 2 for failures while running.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("invalid setup: {0}")]
    Invalid(#[source] genbench_core::Error),
    #[error("{0}")]
    Incompatible(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("run {run_id}: {source}")]
    Runtime {
        run_id: String,
        #[source]
        source: genbench_core::Error,
    },
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_)
            | BenchError::Parse { .. }
            | BenchError::Invalid(_)
            | BenchError::Incompatible(_) => 1,
            BenchError::Io { .. } | BenchError::Runtime { .. } => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Self {
        let path = path.into();
        move |source| BenchError::Io { path, source }
    }
}

impl From<genbench_core::Error> for BenchError {
    fn from(e: genbench_core::Error) -> Self {
        BenchError::Invalid(e)
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
