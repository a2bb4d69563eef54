use fracvec::FvcError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("invalid value for `{key}`: {value}")]
    Value { key: String, value: String },

    #[error("alpha = {alpha}, grid = {grid}: {source}")]
    Row {
        alpha: f64,
        grid: usize,
        #[source]
        source: FvcError,
    },

    #[error(transparent)]
    Core(#[from] FvcError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
