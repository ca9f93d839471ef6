use std::io;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error(transparent)]
    Core(#[from] chaosnet_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}{}: {message}", column_suffix(*.column))]
    Parse { line: u64, column: Option<usize>, message: String },
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("malformed {kind} file: {message}")]
    Format { kind: &'static str, message: String },
    #[error("unsupported {kind} file version {found}")]
    UnsupportedVersion { kind: &'static str, found: i64 },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn column_suffix(column: Option<usize>) -> String {
    column.map(|c| format!(", column {c}")).unwrap_or_default()
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn format(kind: &'static str, message: impl Into<String>) -> Self {
        Error::Format { kind, message: message.into() }
    }
}
