use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The file exists but its contents are not something we can decode.
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },

    /// A configuration key failed to parse or broke an invariant.
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("dimension mismatch: expected {}x{}, found {}x{}", expected.0, expected.1, found.0, found.1)]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    /// Composed content does not fit the configured page.
    #[error(
        "page layout needs {}x{} px but only {}x{} px are available",
        required.0, required.1, available.0, available.1
    )]
    Layout {
        required: (usize, usize),
        available: (usize, usize),
    },

    /// A stage needs an artifact from an earlier stage that is not on disk.
    #[error("stage `{stage}` needs {}; run the upstream stage first", needed.display())]
    MissingArtifact { stage: String, needed: PathBuf },

    #[error("unknown stage `{0}` (expected one of: edges, lines, quantize, density, textures, page)")]
    UnknownStage(String),

    #[error("{0}")]
    Invalid(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn config(key: &str, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        match self {
            already @ Error::Stage { .. } => already,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, with stage wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code: 1 usage, 2 validation, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::UnknownStage(_) => 1,
            Error::Config { .. }
            | Error::DimensionMismatch { .. }
            | Error::Layout { .. }
            | Error::Invalid(_) => 2,
            Error::Io { .. } | Error::Format { .. } | Error::MissingArtifact { .. } => 3,
            Error::Stage { .. } => unreachable!("root() strips stage wrappers"),
        }
    }
}
