use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Every variant renders as a single line so the CLI can print it as a
/// machine-readable reason.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("budget exceeded: {what} needs more than {limit} elements")]
    Budget { what: String, limit: usize },

    #[error("out of window: {element} is not within radius {radius}")]
    OutOfWindow { element: String, radius: u32 },

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("not amenable: {0} has no standard Følner family")]
    NotAmenable(String),

    #[error("unsupported map: {0}")]
    UnsupportedMap(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("coset partition check failed: {0}")]
    Partition(String),

    #[error("incomplete fiber: coefficient at {0} depends on sources outside the window")]
    IncompleteFiber(String),

    #[error("insufficient rows: decision rule needs {needed}, got {got}")]
    InsufficientRows { needed: usize, got: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable identifier for the variant, used in CLI and FFI output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Parse(_) => "parse",
            Error::Budget { .. } => "budget",
            Error::OutOfWindow { .. } => "out-of-window",
            Error::WindowTooSmall(_) => "window-too-small",
            Error::NotAmenable(_) => "not-amenable",
            Error::UnsupportedMap(_) => "unsupported-map",
            Error::GroupMismatch(_) => "group-mismatch",
            Error::Partition(_) => "partition",
            Error::IncompleteFiber(_) => "incomplete-fiber",
            Error::InsufficientRows { .. } => "insufficient-rows",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
