use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("analysis order {requested} exceeds the supported degree {supported} (need a rule of degree >= {required})")]
    Aliasing {
        requested: usize,
        supported: usize,
        required: usize,
    },

    #[error("quantity is undefined for a zero-radius region")]
    ZeroRadius,

    #[error("integration window {window:e} s is shorter than the required {required:e} s")]
    WindowTooSmall { window: f64, required: f64 },

    #[error("at least one plane-wave source is required")]
    NoSources,

    #[error("sample train is empty")]
    EmptySamples,

    #[error("field is identically zero")]
    ZeroField,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
