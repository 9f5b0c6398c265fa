use thiserror::Error;

/// Every failure the library can report. Each kind maps to a process exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("parameters outside the regime of this expansion: {0}")]
    Regime(String),
    #[error("requested size exceeds capacity: {0}")]
    Capacity(String),
    #[error("accuracy target not met: {msg} (best estimate {best})")]
    Accuracy { msg: String, best: String },
    #[error("root not bracketed: f(lo)={f_lo}, f(hi)={f_hi}")]
    Bracket { f_lo: String, f_hi: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn regime(msg: impl Into<String>) -> Self {
        Error::Regime(msg.into())
    }

    pub fn accuracy(msg: impl Into<String>, best: impl ToString) -> Self {
        Error::Accuracy { msg: msg.into(), best: best.to_string() }
    }

    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Capacity(_) => 2,
            Error::Regime(_) => 3,
            Error::Accuracy { .. } | Error::Bracket { .. } => 4,
            Error::Verification(_) => 5,
            Error::Io(_) | Error::Serialize(_) => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialize(e.to_string())
    }
}
