use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Caller supplied something malformed: bad dimensions, out-of-range ids, empty inputs.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    /// A numerical routine could not produce a valid result (rank deficiency,
    /// loss of orthonormality, non-finite values).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 for bad input, 2 for runtime or numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Input(_) | Error::Parse { .. } | Error::UnknownMethod(_) => 1,
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 1,
            Error::Numerical(_) | Error::Io { .. } | Error::Csv(_) => 2,
        }
    }
}
