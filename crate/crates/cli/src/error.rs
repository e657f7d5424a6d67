use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid scenario: {0}")]
    Parse(String),

    #[error("invalid scenario: {0}")]
    Config(String),

    #[error(transparent)]
    Scheme(#[from] squeeze_core::optimizer::UnknownScheme),

    #[error(transparent)]
    Core(#[from] squeeze_core::Error),
}
