use thiserror::Error;

/// Errors raised by the operators, verifiers and special functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FvcError {
    #[error("gamma has a pole at {0}")]
    Pole(f64),

    #[error("gamma overflows f64 at {0}")]
    Overflow(f64),

    #[error("argument |z| = {modulus} exceeds the supported cap {cap}")]
    Domain { modulus: f64, cap: f64 },

    #[error("series cannot reach the requested accuracy (condition estimate {condition:.3e})")]
    PrecisionLoss { condition: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("grid has {got} nodes, at least {min} are required")]
    GridTooSmall { got: usize, min: usize },

    #[error("point {x} lies left of the base point {a}")]
    BelowBase { x: f64, a: f64 },

    #[error("invalid interval [{lo}, {hi}]")]
    Interval { lo: f64, hi: f64 },

    #[error("fractional order {alpha} is outside the supported range {range}")]
    OrderOutOfRange { alpha: f64, range: &'static str },

    #[error("exponent {beta} is not supported by the Caputo power rule of order {alpha}")]
    UnsupportedExponent { beta: f64, alpha: f64 },

    #[error("fields live on different domains")]
    DomainMismatch,

    #[error("path is not an axis-aligned segment")]
    UnsupportedPath,

    #[error("surface is not a rectangle in a coordinate plane")]
    UnsupportedSurface,

    #[error("lower boundary exceeds upper boundary at x = {0}")]
    RegionOrientation(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("field norm grew from {before:.3e} to {after:.3e} in one step")]
    Instability { before: f64, after: f64 },

    #[error("at least {min} frames are required, got {got}")]
    InsufficientFrames { got: usize, min: usize },

    #[error("at least {min} rows are required, got {got}")]
    InsufficientRows { got: usize, min: usize },

    #[error("unknown registry key `{0}`")]
    RegistryMiss(String),

    #[error("table error: {0}")]
    Table(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for FvcError {
    fn from(e: std::io::Error) -> Self {
        FvcError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FvcError>;
