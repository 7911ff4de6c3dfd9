use thiserror::Error;

/// Errors produced by the divtop library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit must be at least 1")]
    ZeroLimit,

    #[error("sieve limit {limit} exceeds the memory budget cap of {cap}")]
    Budget { limit: u64, cap: u64 },

    #[error("argument {n} is outside the built range (limit {limit})")]
    Range { n: u64, limit: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("complex needs {needed} faces, more than the face cap of {cap}")]
    FaceCap { needed: u64, cap: u64 },

    #[error("not closed under {kind}: {detail}")]
    NotClosed { kind: &'static str, detail: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bad cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_in_range(n: u64, limit: u64) -> Result<()> {
    if n > limit {
        Err(Error::Range { n, limit })
    } else {
        Ok(())
    }
}
