use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("DAC code {code} out of range [0, {max}]")]
    CodeOutOfRange { code: i64, max: u32 },

    #[error("voltage {value} V outside [0, {v_fs}] V")]
    VoltageOutOfRange { value: f64, v_fs: f64 },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("record time column is not strictly increasing at sample {index}")]
    NonMonotonicTime { index: usize },

    #[error("record has {0} samples, at least 2 are required")]
    TooFewSamples(usize),

    #[error("signal has zero span, cannot be scaled")]
    ZeroSpan,

    #[error("burst {burst} is not enabled in state {state}")]
    BurstNotEnabled { state: String, burst: String },

    #[error("crossing bisection did not reach {tol:e} s within {iterations} iterations near t = {t} s")]
    ToleranceUnreachable { t: f64, tol: f64, iterations: u32 },

    #[error("handshake violated at t = {t} s: {message}")]
    Handshake { t: f64, message: String },

    #[error("computed off fraction {0} exceeds 1")]
    OffFractionExceedsOne(f64),

    #[error("empty grid")]
    EmptyGrid,

    #[error("record lasts {duration} s, shorter than one {window} s window")]
    RecordTooShort { duration: f64, window: f64 },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
