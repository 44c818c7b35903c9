use std::path::PathBuf;

use crate::lang::Language;
use crate::morphism::MorphismKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error in {language} source: {detail}")]
    Parse { language: Language, detail: String },

    #[error("unsupported language `{0}`")]
    UnsupportedLanguage(String),

    #[error("site is stale: source digest {expected} does not match {actual}")]
    StaleSite { expected: String, actual: String },

    #[error("rewrite of {kind} at `{descriptor}` does not parse")]
    RewriteFailure { kind: MorphismKind, descriptor: String },

    #[error("no applicable site for {kind} at chain step {step}")]
    InapplicableKind { kind: MorphismKind, step: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("environment error: {0}")]
    Environment(String),

    #[error("missing credential: environment variable `{0}` is not set")]
    MissingCredential(String),

    /// Records that should correspond one-to-one do not.
    #[error("record mismatch: {0}")]
    Alignment(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {source}")]
    Record {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
